#![allow(dead_code)]

use anchorlight_core::analysis::{analyze, AnalyzeOptions};
use anchorlight_core::indexer::index_page;
use anchorlight_core::store::{IndexHandle, PageId};
use anchorlight_testkit::{encyclopedia, FIXTURE_BASE};

/// The encyclopedia corpus indexed with stemming on, without analysis.
pub fn fixture_unanalyzed() -> IndexHandle {
    let h = IndexHandle::open_in_memory().unwrap();
    h.set_stemming(true).unwrap();
    let pipeline = h.meta().unwrap().pipeline();
    for page in encyclopedia() {
        index_page(
            &h,
            &page.url(FIXTURE_BASE),
            &page.text(),
            &page.absolute_links(FIXTURE_BASE),
            &pipeline,
        )
        .unwrap();
    }
    h
}

/// The encyclopedia corpus, indexed and analyzed.
pub fn fixture() -> IndexHandle {
    let h = fixture_unanalyzed();
    analyze(&h, &AnalyzeOptions::default()).unwrap();
    h
}

pub fn page(h: &IndexHandle, path: &str) -> PageId {
    h.url_id(&format!("{FIXTURE_BASE}{path}")).unwrap().unwrap()
}
