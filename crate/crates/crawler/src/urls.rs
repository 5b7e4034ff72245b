use url::Url;

/// Resolves `href` against `base` and canonicalizes the result.
///
/// The fragment is dropped, scheme and host are lowercased, empty path
/// segments are collapsed and the query string is kept. Anything that is
/// not http or https yields `None`.
pub fn normalize_url(base: &Url, href: &str) -> Option<Url> {
    let href = href.trim();
    let lower = href.to_ascii_lowercase();
    if lower.starts_with("javascript:") || lower.starts_with("mailto:") {
        return None;
    }
    let mut url = base.join(href).ok()?;
    if !matches!(url.scheme(), "http" | "https") || url.host_str().is_none_or(str::is_empty) {
        return None;
    }
    url.set_fragment(None);
    collapse_empty_segments(&mut url);
    Some(url)
}

/// Parses an absolute seed URL and canonicalizes it like a link.
pub fn parse_seed(seed: &str) -> Option<Url> {
    let url = Url::parse(seed.trim()).ok()?;
    normalize_url(&url, "")
}

fn collapse_empty_segments(url: &mut Url) {
    let path = url.path();
    if !path.contains("//") {
        return;
    }
    let trailing = path.ends_with('/');
    let segments: Vec<&str> = path.split('/').filter(|s| !s.is_empty()).collect();
    let mut out = format!("/{}", segments.join("/"));
    if trailing && !segments.is_empty() {
        out.push('/');
    }
    // dot segments were already removed by the parser; re-resolving keeps it that way
    url.set_path(&out);
    if let Ok(resolved) = url.join(url.path()) {
        let query = url.query().map(str::to_string);
        *url = resolved;
        url.set_query(query.as_deref());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(base: &str, href: &str) -> Option<String> {
        normalize_url(&Url::parse(base).unwrap(), href).map(String::from)
    }

    #[test]
    fn fragment_is_stripped() {
        assert_eq!(n("http://a/x/", "y.html#top").as_deref(), Some("http://a/x/y.html"));
    }

    #[test]
    fn non_http_schemes_are_dropped() {
        assert_eq!(n("http://a/", "mailto:z@a"), None);
        assert_eq!(n("http://a/", "javascript:void(0)"), None);
        assert_eq!(n("http://a/", "ftp://a/file"), None);
        assert_eq!(n("http://a/", "JavaScript:alert(1)"), None);
    }

    #[test]
    fn case_and_empty_segments() {
        assert_eq!(n("HTTP://A//b/../c", "").as_deref(), Some("http://a/c"));
        assert_eq!(n("http://Example.COM:80/a//b/", "").as_deref(), Some("http://example.com/a/b/"));
    }

    #[test]
    fn query_is_kept() {
        assert_eq!(n("http://a/x", "/p?q=1#f").as_deref(), Some("http://a/p?q=1"));
        assert_eq!(n("http://a//x?k=v", "").as_deref(), Some("http://a/x?k=v"));
    }

    #[test]
    fn relative_resolution() {
        assert_eq!(n("http://a/b/c/d", "../e").as_deref(), Some("http://a/b/e"));
        assert_eq!(n("http://a/b/c", "//other/x").as_deref(), Some("http://other/x"));
        assert_eq!(n("https://a/", "http://b/").as_deref(), Some("http://b/"));
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("http://A/x#y").map(String::from).as_deref(), Some("http://a/x"));
        assert_eq!(parse_seed("not a url"), None);
    }
}
