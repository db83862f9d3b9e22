//! Social-relations measures over the contact log: tie strength, the `beta`
//! gate, presenter degree centrality, and the popularity gate.

use crate::domain::{ContactLog, PersonId};
use crate::Error;

/// Tie strength between a presenter and a participant:
/// `(frequency x duration_min) / t_total`.
///
/// Values are not clamped to 1 even though typical operating ranges top out
/// below it; the formula permits `frequency x duration > T` and the
/// thresholds do the gating.
#[derive(Clone, Debug, PartialEq)]
pub struct TieStrength {
    pub presenter: PersonId,
    pub participant: PersonId,
    pub value: f64,
}

/// Presenter popularity: the number of participants with a direct link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralityScore {
    pub presenter: PersonId,
    pub degree: u32,
}

/// Compute the tie strength for a (presenter, participant) pair. A missing
/// log entry is a zero-strength tie, not an error.
pub fn tie_strength(
    log: &ContactLog,
    presenter: &PersonId,
    participant: &PersonId,
) -> Result<TieStrength, Error> {
    if log.t_total == 0 {
        return Err(Error::InvalidTimeFrame(log.t_total));
    }
    let value = match log.get(presenter, participant) {
        Some(c) => f64::from(c.frequency) * f64::from(c.duration_min) / f64::from(log.t_total),
        None => 0.0,
    };
    Ok(TieStrength {
        presenter: presenter.clone(),
        participant: participant.clone(),
        value,
    })
}

/// Tie-strength gate: `value >= beta`, inclusive on the boundary.
pub fn passes_beta(tie: &TieStrength, beta: f64) -> bool {
    tie.value >= beta
}

/// Degree centrality of a presenter: the count of distinct participants
/// with a direct link, where a link is a logged contact with frequency >= 1
/// and duration > 0.
pub fn degree_centrality(log: &ContactLog, presenter: &PersonId) -> CentralityScore {
    let degree = log
        .iter()
        .filter(|((p, x), contact)| {
            p == presenter && x != presenter && contact.frequency >= 1 && contact.duration_min > 0
        })
        .count() as u32;
    CentralityScore {
        presenter: presenter.clone(),
        degree,
    }
}

/// Popularity gate: `degree >= threshold`, inclusive.
pub fn passes_popularity(score: &CentralityScore, threshold: u32) -> bool {
    score.degree >= threshold
}

/// Median presenter degree (upper median for even counts), used as the
/// default popularity threshold. Returns 0 when there are no presenters.
pub fn median_presenter_degree<'a>(
    log: &ContactLog,
    presenters: impl Iterator<Item = &'a PersonId>,
) -> u32 {
    let mut degrees: Vec<u32> = presenters
        .map(|p| degree_centrality(log, p).degree)
        .collect();
    if degrees.is_empty() {
        return 0;
    }
    degrees.sort_unstable();
    degrees[degrees.len() / 2]
}
