//! User-based collaborative filtering: Pearson correlation between rating
//! vectors, k-most-similar neighbor selection, and the `gamma` gate.

use std::collections::BTreeSet;

use crate::domain::{mean_rating, PersonId, RatingMatrix};
use crate::Error;

/// Smallest co-rated overlap for which the correlation is computable: a
/// single shared item always centers to zero variance.
pub const MIN_OVERLAP: usize = 2;

/// Pearson similarity between a presenter and a participant.
///
/// `value` is `None` when the correlation is undefined: fewer than
/// [`MIN_OVERLAP`] co-rated items, or a zero-variance centered vector.
/// Undefined is deliberately distinct from 0.0 — "no signal" must not pass
/// a correlation gate as "no correlation".
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityScore {
    pub presenter: PersonId,
    pub participant: PersonId,
    pub value: Option<f64>,
    pub co_rated_count: usize,
}

/// Pearson correlation over the co-rated item set, with per-person global
/// means (means over *all* of a person's ratings, not just the co-rated
/// subset).
///
/// With global means the raw quotient can stray outside [-1, 1] on sparse
/// pathological rows; such values are clamped and logged.
pub fn pearson(matrix: &RatingMatrix, c: &PersonId, d: &PersonId) -> Result<SimilarityScore, Error> {
    if matrix.ratings_of(c).is_none() {
        return Err(Error::UnknownPerson(c.to_string()));
    }
    if matrix.ratings_of(d).is_none() {
        return Err(Error::UnknownPerson(d.to_string()));
    }
    Ok(pearson_lenient(matrix, c, d))
}

/// Like [`pearson`] but treats missing rows as an undefined similarity
/// instead of an error. The recommendation loop uses this: a person with no
/// ratings simply produces no context-stream evidence.
pub(crate) fn pearson_lenient(
    matrix: &RatingMatrix,
    c: &PersonId,
    d: &PersonId,
) -> SimilarityScore {
    let co_rated = matrix.co_rated(c, d);
    let co_rated_count = co_rated.len();
    let undefined = SimilarityScore {
        presenter: c.clone(),
        participant: d.clone(),
        value: None,
        co_rated_count,
    };

    if co_rated_count < MIN_OVERLAP {
        return undefined;
    }
    // Overlap >= MIN_OVERLAP implies both rows exist and are non-empty.
    let mean_c = mean_rating(matrix, c).expect("row exists");
    let mean_d = mean_rating(matrix, d).expect("row exists");

    let mut num = 0.0;
    let mut den_c = 0.0;
    let mut den_d = 0.0;
    for (_, rc, rd) in &co_rated {
        let dc = f64::from(*rc) - mean_c;
        let dd = f64::from(*rd) - mean_d;
        num += dc * dd;
        den_c += dc * dc;
        den_d += dd * dd;
    }
    if den_c == 0.0 || den_d == 0.0 {
        return undefined;
    }

    let raw = num / (den_c.sqrt() * den_d.sqrt());
    let value = raw.clamp(-1.0, 1.0);
    if raw != value {
        log::debug!(
            "pearson({c}, {d}) = {raw} outside [-1, 1] under global means; clamped"
        );
    }
    SimilarityScore {
        value: Some(value),
        ..undefined
    }
}

/// The up-to-`k` highest defined similarities between `target` and the
/// candidates, descending. Undefined scores are excluded. Ties break by
/// co-rated count (descending) then candidate id (ascending) so runs are
/// reproducible.
pub fn k_most_similar(
    matrix: &RatingMatrix,
    target: &PersonId,
    candidates: &BTreeSet<PersonId>,
    k: usize,
) -> Vec<SimilarityScore> {
    let mut scored: Vec<SimilarityScore> = candidates
        .iter()
        .filter(|c| *c != target)
        .map(|c| {
            let s = pearson_lenient(matrix, c, target);
            SimilarityScore {
                presenter: c.clone(),
                participant: target.clone(),
                ..s
            }
        })
        .filter(|s| s.value.is_some())
        .collect();
    scored.sort_by(|a, b| {
        b.value
            .unwrap()
            .total_cmp(&a.value.unwrap())
            .then(b.co_rated_count.cmp(&a.co_rated_count))
            .then(a.presenter.cmp(&b.presenter))
    });
    scored.truncate(k);
    scored
}

/// Preference-similarity gate: defined and `value >= gamma`. Inclusive on
/// the boundary; undefined never passes.
pub fn passes_gamma(score: &SimilarityScore, gamma: f64) -> bool {
    score.value.is_some_and(|v| v >= gamma)
}
