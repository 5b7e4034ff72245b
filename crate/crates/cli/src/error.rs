use std::fmt;

use anchorlight_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Bad flags or parameters: exit 2, HTTP 400.
    Usage,
    /// Well-formed request the index cannot answer: HTTP 422.
    Unanswerable,
    /// Everything else: exit 1, HTTP 500.
    Runtime,
}

/// An error as shown to a CLI or HTTP client.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppError {
    pub kind: Kind,
    pub code: &'static str,
    pub message: String,
}

impl AppError {
    pub fn usage(message: impl Into<String>) -> Self {
        AppError {
            kind: Kind::Usage,
            code: "BadRequest",
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        AppError {
            kind: Kind::Runtime,
            code: "Runtime",
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match (self.kind, self.code) {
            (Kind::Usage, _) | (_, "EmptyQuery") => 2,
            _ => 1,
        }
    }

    pub fn http_status(&self) -> u16 {
        match self.kind {
            Kind::Usage => 400,
            Kind::Unanswerable => 422,
            Kind::Runtime => 500,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({"error": {"code": self.code, "message": self.message}}).to_string()
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::EmptyQuery | Error::NeedsAnalysis { .. } => Kind::Unanswerable,
            Error::InvalidScheme(_)
            | Error::UnknownScorer(_)
            | Error::InvalidScorerWeight(_)
            | Error::UnknownPreset(_) => Kind::Usage,
            _ => Kind::Runtime,
        };
        AppError {
            kind,
            code: e.code(),
            message: e.to_string(),
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for AppError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapping() {
        let e = AppError::from(Error::EmptyQuery);
        assert_eq!((e.exit_code(), e.http_status()), (2, 422));
        let e = AppError::from(Error::NeedsAnalysis { table: "pagerank" });
        assert_eq!((e.exit_code(), e.http_status()), (1, 422));
        assert!(e.message.contains("run analyze first"));
        let e = AppError::from(Error::UnknownScorer("x".into()));
        assert_eq!((e.exit_code(), e.http_status()), (2, 400));
        let e = AppError::from(Error::NothingToAnalyze);
        assert_eq!((e.exit_code(), e.http_status()), (1, 500));
    }

    #[test]
    fn json_body() {
        let v: serde_json::Value = serde_json::from_str(&AppError::from(Error::EmptyQuery).to_json()).unwrap();
        assert_eq!(v["error"]["code"], "EmptyQuery");
    }
}
