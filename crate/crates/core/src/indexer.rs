use crate::error::Result;
use crate::store::{IndexHandle, PageId, Posting};
use crate::text::{Pipeline, Source};

/// Writes one fetched page: a posting per normalized content token and a
/// link row per anchor, with one `linkwords` row per normalized anchor token.
///
/// A URL that is already indexed is left untouched and its id returned.
/// Everything is written in one savepoint, so a failure leaves no partial page.
pub fn index_page(
    h: &IndexHandle,
    url: &str,
    text: &str,
    links: &[(String, String)],
    pipeline: &Pipeline,
) -> Result<PageId> {
    if h.is_indexed(url)? {
        if let Some(id) = h.url_id(url)? {
            return Ok(id);
        }
    }
    h.in_transaction(|h| {
        let page = h.get_or_insert_url(url)?;
        let content = pipeline.normalize(text, Source::Content);
        for (location, term) in content.tokens.iter().enumerate() {
            let wordid = h.get_or_insert_word(term)?;
            h.add_posting(Posting {
                urlid: page,
                wordid,
                location: location as u32,
            })?;
        }
        for (target, anchor) in links {
            let to = h.get_or_insert_url(target)?;
            let linkid = h.add_link(page, to)?;
            for term in pipeline.normalize(anchor, Source::Anchor).tokens {
                let wordid = h.get_or_insert_word(&term)?;
                h.add_link_word(wordid, linkid)?;
            }
        }
        h.mark_indexed(page)?;
        Ok(page)
    })
}
