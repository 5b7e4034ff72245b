use encoding_rs::Encoding;
use scraper::{ElementRef, Html, Node, Selector};
use url::Url;

use crate::urls::normalize_url;

/// Visible text and outgoing links of one HTML page.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Extracted {
    pub title: String,
    pub text: String,
    pub links: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("unknown charset {0:?}")]
    UnknownCharset(String),
    #[error("bytes are not valid {0}")]
    Undecodable(&'static str),
}

const HIDDEN: &[&str] = &["script", "style", "noscript", "template", "head"];

/// Decodes `body` and returns its visible text and normalized links.
///
/// `content_type` is the raw header value, if any.
pub fn extract(body: &[u8], content_type: Option<&str>, base: &Url) -> Result<Extracted, ExtractError> {
    let html = decode(body, content_type)?;
    Ok(extract_str(&html, base))
}

/// Strict decode: a declared or sniffed charset must decode without replacement.
pub fn decode(body: &[u8], content_type: Option<&str>) -> Result<String, ExtractError> {
    let (encoding, skip) = match Encoding::for_bom(body) {
        Some((enc, len)) if declared_charset(body, content_type).is_none() => (enc, len),
        _ => {
            let enc = match declared_charset(body, content_type) {
                Some(label) => Encoding::for_label(label.as_bytes())
                    .ok_or(ExtractError::UnknownCharset(label))?,
                None => encoding_rs::UTF_8,
            };
            let skip = match Encoding::for_bom(body) {
                Some((bom, len)) if bom == enc => len,
                _ => 0,
            };
            (enc, skip)
        }
    };
    encoding
        .decode_without_bom_handling_and_without_replacement(&body[skip..])
        .map(|s| s.into_owned())
        .ok_or(ExtractError::Undecodable(encoding.name()))
}

fn declared_charset(body: &[u8], content_type: Option<&str>) -> Option<String> {
    if let Some(ct) = content_type {
        if let Some(cs) = charset_param(ct) {
            return Some(cs);
        }
    }
    let head = &body[..body.len().min(1024)];
    let head = String::from_utf8_lossy(head).to_ascii_lowercase();
    let at = head.find("charset=")?;
    let rest = head[at + "charset=".len()..].trim_start_matches(['"', '\'', ' ']);
    let end = rest
        .find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | ':' | '.')))
        .unwrap_or(rest.len());
    (end > 0).then(|| rest[..end].to_string())
}

fn charset_param(content_type: &str) -> Option<String> {
    content_type.split(';').skip(1).find_map(|p| {
        let (k, v) = p.split_once('=')?;
        k.trim()
            .eq_ignore_ascii_case("charset")
            .then(|| v.trim().trim_matches(['"', '\'']).to_string())
            .filter(|v| !v.is_empty())
    })
}

/// Whether a response should be treated as HTML.
pub fn is_html(content_type: Option<&str>, body: &[u8]) -> bool {
    match content_type.map(|ct| ct.split(';').next().unwrap_or("").trim().to_ascii_lowercase()) {
        Some(mime) if !mime.is_empty() => mime == "text/html" || mime == "application/xhtml+xml",
        _ => sniff_html(body),
    }
}

fn sniff_html(body: &[u8]) -> bool {
    let head = String::from_utf8_lossy(&body[..body.len().min(512)]).to_ascii_lowercase();
    let head = head.trim_start_matches('\u{feff}').trim_start();
    head.starts_with("<!doctype html") || head.starts_with("<html")
}

/// Extraction on already-decoded markup.
pub fn extract_str(html: &str, base: &Url) -> Extracted {
    let doc = Html::parse_document(html);
    let base = Selector::parse("base[href]")
        .ok()
        .and_then(|s| doc.select(&s).next())
        .and_then(|b| b.value().attr("href"))
        .and_then(|href| normalize_url(base, href))
        .unwrap_or_else(|| base.clone());

    let title = Selector::parse("title")
        .ok()
        .and_then(|s| doc.select(&s).next())
        .map(|t| collapse(&t.text().collect::<Vec<_>>().join(" ")))
        .unwrap_or_default();

    let mut parts = Vec::new();
    if !title.is_empty() {
        parts.push(title.clone());
    }
    visible_text(doc.root_element(), &mut parts);
    let text = parts.join(" ");

    let mut links = Vec::new();
    let anchors = Selector::parse("a[href]").expect("static selector");
    for a in doc.select(&anchors) {
        let href = a.value().attr("href").unwrap_or("").trim();
        if href.is_empty() || href.starts_with('#') {
            continue;
        }
        let Some(target) = normalize_url(&base, href) else { continue };
        let mut words = Vec::new();
        visible_text(a, &mut words);
        links.push((target.to_string(), collapse(&words.join(" "))));
    }
    Extracted { title, text, links }
}

fn visible_text(el: ElementRef<'_>, out: &mut Vec<String>) {
    for child in el.children() {
        match child.value() {
            Node::Text(t) => {
                let t = collapse(t);
                if !t.is_empty() {
                    out.push(t);
                }
            }
            Node::Element(e) if HIDDEN.contains(&e.name()) => {}
            Node::Element(_) => {
                if let Some(child) = ElementRef::wrap(child) {
                    visible_text(child, out);
                }
            }
            _ => {}
        }
    }
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Url {
        Url::parse("http://a/").unwrap()
    }

    #[test]
    fn single_anchor() {
        let e = extract_str(r#"<a href="/b">Good Page</a>"#, &base());
        assert_eq!(e.links, vec![("http://a/b".to_string(), "Good Page".to_string())]);
    }

    #[test]
    fn script_is_not_text() {
        assert_eq!(extract_str("<script>x</script>hello", &base()).text, "hello");
        let e = extract_str("<style>p{}</style><noscript>n</noscript><p>a <b>b</b></p>", &base());
        assert_eq!(e.text, "a b");
    }

    #[test]
    fn title_leads_the_text() {
        let e = extract_str("<html><head><title> T  x </title></head><body>body</body></html>", &base());
        assert_eq!(e.title, "T x");
        assert_eq!(e.text, "T x body");
    }

    #[test]
    fn base_href_is_honoured() {
        let e = extract_str(r#"<base href="http://c/d/"><a href="e">x</a>"#, &base());
        assert_eq!(e.links[0].0, "http://c/d/e");
    }

    #[test]
    fn fragments_and_bad_schemes_are_dropped() {
        let e = extract_str(
            r##"<a href="#top">t</a><a href="">e</a><a href="mailto:x@y">m</a><a href="/p#s">p</a>"##,
            &base(),
        );
        assert_eq!(e.links, vec![("http://a/p".to_string(), "p".to_string())]);
    }

    #[test]
    fn charset_sources() {
        assert_eq!(charset_param("text/html; charset=\"ISO-8859-1\"").as_deref(), Some("ISO-8859-1"));
        assert_eq!(charset_param("text/html"), None);
        let body = b"<meta charset=\"windows-1252\"><p>caf\xe9</p>";
        assert_eq!(decode(body, Some("text/html")).unwrap(), "<meta charset=\"windows-1252\"><p>caf\u{e9}</p>");
        let body = b"<meta http-equiv=\"content-type\" content=\"text/html; charset=latin1\">";
        assert_eq!(declared_charset(body, None).as_deref(), Some("latin1"));
    }

    #[test]
    fn invalid_utf8_is_an_error() {
        assert!(matches!(
            decode(b"ok \xff\xfe\xfd", Some("text/html; charset=utf-8")),
            Err(ExtractError::Undecodable("UTF-8"))
        ));
        assert!(matches!(decode(b"x", Some("text/html; charset=klingon")), Err(ExtractError::UnknownCharset(_))));
    }

    #[test]
    fn bom_wins_when_nothing_is_declared() {
        let mut body = vec![0xFF, 0xFE];
        for c in "hi".encode_utf16() {
            body.extend_from_slice(&c.to_le_bytes());
        }
        assert_eq!(decode(&body, None).unwrap(), "hi");
        assert_eq!(decode(b"\xEF\xBB\xBFhi", Some("text/html; charset=utf-8")).unwrap(), "hi");
    }

    #[test]
    fn html_gate() {
        assert!(is_html(Some("text/html; charset=utf-8"), b""));
        assert!(is_html(Some("application/xhtml+xml"), b""));
        assert!(!is_html(Some("image/png"), b"<html>"));
        assert!(is_html(None, b"  <!DOCTYPE html><p>"));
        assert!(!is_html(None, b"plain text"));
    }
}
