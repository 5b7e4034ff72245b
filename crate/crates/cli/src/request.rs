use anchorlight_core::query::{AnchorScheme, Mode, ScorerWeights, SearchRequest, DEFAULT_LIMIT};

use crate::error::AppError;

/// Search parameters as strings, before validation. Both the CLI flags and
/// the `/api/search` query string end up here.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchParams {
    pub q: Option<String>,
    /// `(scorer, value)` pairs.
    pub weights: Vec<(String, String)>,
    pub preset: Option<String>,
    pub scheme: Option<String>,
    pub mode: Option<String>,
    pub limit: Option<String>,
}

impl SearchParams {
    /// Reads `q`, `mode`, `scheme`, `limit`, `preset` and `w.<scorer>` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self, AppError> {
        let mut p = SearchParams::default();
        for (k, v) in pairs {
            match k.as_str() {
                "q" => p.q = Some(v),
                "mode" => p.mode = Some(v),
                "scheme" => p.scheme = Some(v),
                "limit" => p.limit = Some(v),
                "preset" => p.preset = Some(v),
                _ => match k.strip_prefix("w.") {
                    Some(name) => p.weights.push((name.to_string(), v)),
                    None => return Err(AppError::usage(format!("unknown parameter {k:?}"))),
                },
            }
        }
        Ok(p)
    }

    /// Validates everything except the query text itself.
    ///
    /// Without explicit weights the preset (or `default_preset`) applies;
    /// explicit weights replace preset entries one by one.
    pub fn into_request(self, default_preset: &str) -> Result<SearchRequest, AppError> {
        let query = self.q.ok_or_else(|| AppError::usage("missing query parameter q"))?;
        let mut weights = match (&self.preset, self.weights.is_empty()) {
            (Some(name), _) => entries(&ScorerWeights::preset(name)?),
            (None, true) => entries(&ScorerWeights::preset(default_preset)?),
            (None, false) => Vec::new(),
        };
        for (name, value) in &self.weights {
            let (scorer, w) = ScorerWeights::parse_pair(&format!("{name}={value}"))?;
            weights.retain(|(s, _)| *s != scorer);
            weights.push((scorer, w));
        }
        let mut weights = ScorerWeights::new(weights)?;
        if let Some(s) = &self.scheme {
            let n: u8 = s
                .trim()
                .parse()
                .map_err(|_| AppError::usage(format!("scheme must be 1..=4, got {s:?}")))?;
            weights = weights.with_scheme(AnchorScheme::new(n)?);
        }
        let mode = match &self.mode {
            Some(m) => m.parse::<Mode>().map_err(AppError::usage)?,
            None => Mode::default(),
        };
        let limit = match &self.limit {
            Some(l) => match l.trim().parse::<usize>() {
                Ok(n) if n > 0 => n,
                _ => return Err(AppError::usage(format!("limit must be a positive integer, got {l:?}"))),
            },
            None => DEFAULT_LIMIT,
        };
        Ok(SearchRequest {
            query,
            weights,
            mode,
            limit,
        })
    }
}

fn entries(w: &ScorerWeights) -> Vec<(anchorlight_core::query::Scorer, f64)> {
    w.entries().collect()
}
