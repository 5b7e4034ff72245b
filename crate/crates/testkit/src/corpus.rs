//! A small encyclopedia-style corpus with descriptive anchor text.

/// Base URL used when the corpus is indexed without a server.
pub const FIXTURE_BASE: &str = "http://fixture.test";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixturePage {
    pub path: String,
    pub title: String,
    pub body: String,
    /// (href path, anchor text)
    pub links: Vec<(String, String)>,
}

impl FixturePage {
    pub fn new(path: &str, title: &str, body: &str, links: &[(&str, &str)]) -> Self {
        FixturePage {
            path: path.to_string(),
            title: title.to_string(),
            body: body.to_string(),
            links: links
                .iter()
                .map(|(h, a)| (h.to_string(), a.to_string()))
                .collect(),
        }
    }

    pub fn url(&self, base: &str) -> String {
        format!("{}{}", base.trim_end_matches('/'), self.path)
    }

    /// Visible text as the crawler extracts it: title, body, then anchors.
    pub fn text(&self) -> String {
        let mut s = format!("{} {}", self.title, self.body);
        for (_, anchor) in &self.links {
            s.push(' ');
            s.push_str(anchor);
        }
        s
    }

    /// Absolute (target url, anchor text) pairs.
    pub fn absolute_links(&self, base: &str) -> Vec<(String, String)> {
        self.links
            .iter()
            .map(|(h, a)| (format!("{}{}", base.trim_end_matches('/'), h), a.clone()))
            .collect()
    }

    pub fn html(&self) -> String {
        let mut s = format!(
            "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>{}</title>\
             <style>body {{ font-family: serif; }}</style></head><body>\n<p>{}</p>\n<ul>\n",
            self.title, self.body
        );
        for (href, anchor) in &self.links {
            s.push_str(&format!("<li><a href=\"{href}\">{anchor}</a></li>\n"));
        }
        s.push_str("</ul>\n<script>var tracking = 'navigation';</script>\n</body></html>\n");
        s
    }
}

/// Paths that are linked from the corpus but never served.
pub const UNFETCHED: &[&str] = &["/wiki/Lighthouse"];

/// Nine pages about navigation and ships plus one keyword-stuffed page.
///
/// `/wiki/Sextant` never mentions navigation in its own text (anchors
/// included) but is linked by anchors that do. `/spam` repeats the word but nobody links to it with
/// it. `/wiki/Lighthouse` is only known through an anchor.
pub fn encyclopedia() -> Vec<FixturePage> {
    vec![
        FixturePage::new(
            "/",
            "Fixture Encyclopedia",
            "Main page of the fixture encyclopedia. Browse articles about navigation, astronomy and ships.",
            &[
                ("/wiki/Navigation", "Navigation"),
                ("/wiki/Sextant", "celestial navigation instrument"),
                ("/wiki/Compass", "Compass"),
                ("/wiki/Astronomy", "Astronomy"),
                ("/wiki/Ship", "Ship"),
                ("/spam", "Cheap deals"),
                ("/wiki/Good_page", "good page"),
            ],
        ),
        FixturePage::new(
            "/wiki/Navigation",
            "Navigation",
            "Navigation is the process of monitoring and controlling the movement of a craft or vehicle \
             from one place to another. Navigators rely on a compass and a sextant. Marine navigation \
             and land navigation are common fields.",
            &[
                ("/wiki/Compass", "magnetic compass"),
                ("/wiki/Sextant", "sextant"),
                ("/wiki/Ship", "ships"),
                ("/wiki/Astronomy", "astronomy"),
            ],
        ),
        FixturePage::new(
            "/wiki/Sextant",
            "Sextant",
            "A sextant is a doubly reflecting instrument that measures the angular distance between two \
             visible objects such as the Sun and the horizon.",
            &[
                ("/wiki/Astronomy", "astronomical objects"),
                ("/wiki/Navigation", "position fixing methods"),
            ],
        ),
        FixturePage::new(
            "/wiki/Compass",
            "Compass",
            "A compass is a device that shows the cardinal directions used for navigation and geographic orientation.",
            &[("/wiki/Navigation", "navigation"), ("/wiki/Ship", "ship")],
        ),
        FixturePage::new(
            "/wiki/Astronomy",
            "Astronomy",
            "Astronomy is a natural science that studies celestial objects and phenomena. Sailors once \
             used the stars for celestial navigation.",
            &[
                ("/wiki/Sextant", "sextant"),
                ("/wiki/Navigation", "celestial navigation"),
            ],
        ),
        FixturePage::new(
            "/wiki/Ship",
            "Ship",
            "A ship is a large watercraft that travels the oceans. This is a good page about ships and harbours.",
            &[
                ("/wiki/Navigation", "Navigation of ships"),
                ("/wiki/Compass", "compass"),
                ("/wiki/Harbour", "harbour"),
            ],
        ),
        FixturePage::new(
            "/spam",
            "Best deals",
            "navigation navigation navigation navigation navigation navigation navigation navigation \
             navigation navigation best navigation deals navigation",
            &[("/", "home")],
        ),
        FixturePage::new(
            "/wiki/Good_page",
            "Good page",
            "This good page explains what makes a good page on a wiki.",
            &[("/", "main page")],
        ),
        FixturePage::new(
            "/wiki/Harbour",
            "Harbour",
            "A harbour is a sheltered body of water where ships can be docked.",
            &[
                ("/wiki/Ship", "ships"),
                ("/wiki/Lighthouse", "navigation aid lighthouse"),
            ],
        ),
    ]
}
