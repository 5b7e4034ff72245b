use anchorlight_crawler::extract::extract_str;
use anchorlight_crawler::normalize_url;
use anchorlight_testkit::FixturePage;
use proptest::prelude::*;
use url::Url;

fn n(base: &str, href: &str) -> Option<String> {
    normalize_url(&Url::parse(base).unwrap(), href).map(String::from)
}

#[test]
fn normalization_examples() {
    assert_eq!(n("http://a/x/", "y.html#top").as_deref(), Some("http://a/x/y.html"));
    assert_eq!(n("http://a/", "mailto:z@a"), None);
    assert_eq!(n("HTTP://A//b/../c", "").as_deref(), Some("http://a/c"));
}

#[test]
fn twelve_anchors_two_fragments_give_ten_links() {
    let mut links: Vec<(&str, &str)> = vec![
        ("/wiki/Navigation", "Navigation"),
        ("#history", "History"),
        ("/wiki/Sextant", "sextant"),
        ("/wiki/Compass", "compass"),
        ("http://other.test/atlas", "atlas"),
        ("../wiki/Astronomy", "astronomy"),
        ("#references", "References"),
        ("/wiki/Ship?lang=en", "ship"),
        ("/wiki/Harbour#docks", "docks"),
        ("Lighthouse", "lighthouse"),
        ("//mirror.test/", "mirror"),
        ("/spam", "cheap"),
    ];
    assert_eq!(links.len(), 12);
    let page = FixturePage::new("/wiki/Index", "Index", "All articles.", &links);
    let base = Url::parse("http://fixture.test/wiki/Index").unwrap();
    let got = extract_str(&page.html(), &base).links;
    links.retain(|(h, _)| !h.starts_with('#'));
    assert_eq!(got.len(), 10);
    let expected = [
        "http://fixture.test/wiki/Navigation",
        "http://fixture.test/wiki/Sextant",
        "http://fixture.test/wiki/Compass",
        "http://other.test/atlas",
        "http://fixture.test/wiki/Astronomy",
        "http://fixture.test/wiki/Ship?lang=en",
        "http://fixture.test/wiki/Harbour",
        "http://fixture.test/wiki/Lighthouse",
        "http://mirror.test/",
        "http://fixture.test/spam",
    ];
    for ((target, anchor), (want, (_, text))) in got.iter().zip(expected.iter().zip(&links)) {
        assert_eq!(target, want);
        assert_eq!(anchor, text);
    }
}

#[test]
fn fixture_page_text_matches_extraction() {
    for page in anchorlight_testkit::encyclopedia() {
        let base = Url::parse(&page.url(anchorlight_testkit::FIXTURE_BASE)).unwrap();
        let e = extract_str(&page.html(), &base);
        assert_eq!(e.text, page.text(), "{}", page.path);
        assert_eq!(e.links, page.absolute_links(anchorlight_testkit::FIXTURE_BASE));
    }
}

proptest! {
    #[test]
    fn normalization_is_idempotent(
        host in "[a-zA-Z][a-zA-Z0-9]{0,8}",
        segs in proptest::collection::vec("[a-z.]{0,4}", 0..5),
        query in proptest::option::of("[a-z=&]{1,6}"),
        frag in proptest::option::of("[a-z]{0,5}"),
    ) {
        let mut href = format!("http://{host}/{}", segs.join("/"));
        if let Some(q) = &query {
            href.push('?');
            href.push_str(q);
        }
        if let Some(f) = &frag {
            href.push('#');
            href.push_str(f);
        }
        let base = Url::parse("http://base.test/").unwrap();
        let once = normalize_url(&base, &href).unwrap();
        prop_assert_eq!(once.fragment(), None);
        prop_assert!(!once.path().contains("//"));
        prop_assert_eq!(once.host_str().unwrap(), host.to_ascii_lowercase());
        let twice = normalize_url(&once, once.as_str()).unwrap();
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(normalize_url(&once, "").unwrap(), once);
    }
}
