//! The recommendation engine: iterate every (participant, presenter) pair,
//! admit sessions into the social-context stream through the Pearson gate
//! and into the social-relations stream through the tie-strength or
//! popularity gate, post-filter both by availability, then rank and
//! truncate per participant.
//!
//! The two streams are generated independently: the context stream reads
//! only the rating matrix, the relations stream only the contact log, so a
//! participant with no rating overlap can still be reached through strong
//! ties, and vice versa.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::context::match_context;
use crate::domain::{
    validate_dataset, Dataset, DegreePolicy, PersonId, Session, SessionId, Thresholds,
};
use crate::similarity::{k_most_similar, passes_gamma, pearson_lenient};
use crate::social::{
    degree_centrality, median_presenter_degree, passes_beta, passes_popularity, tie_strength,
};
use crate::Error;

/// Which evidence stream a recommendation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stream {
    Context,
    Relations,
}

impl Stream {
    pub fn as_str(self) -> &'static str {
        match self {
            Stream::Context => "context",
            Stream::Relations => "relations",
        }
    }
}

/// Which predicate admitted a recommendation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    /// Context stream: Pearson similarity passed `gamma`.
    Gamma,
    /// Relations stream: tie strength passed `beta`.
    Beta,
    /// Relations stream: presenter degree passed the popularity threshold
    /// while the tie itself fell below `beta`.
    Popularity,
    /// Relations stream: both predicates passed.
    BetaPopularity,
}

impl Gate {
    pub fn as_str(self) -> &'static str {
        match self {
            Gate::Gamma => "gamma",
            Gate::Beta => "beta",
            Gate::Popularity => "popularity",
            Gate::BetaPopularity => "beta,popularity",
        }
    }

    /// Admitted solely through degree centrality, with no tie evidence.
    pub fn popularity_only(self) -> bool {
        matches!(self, Gate::Popularity)
    }
}

/// One ranked (participant -> session) assignment with score provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct Recommendation {
    pub participant: PersonId,
    pub session: SessionId,
    pub stream: Stream,
    /// Context stream: the Pearson value. Relations stream: the tie value
    /// (which is below `beta` for popularity-only admissions).
    pub score: f64,
    pub gate: Gate,
    /// Degree of the session's presenter at generation time.
    pub presenter_degree: u32,
    /// 1-based rank within (participant, stream).
    pub rank: u32,
}

/// All recommendations of a run, with the generating parameters embedded
/// for provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct RecommendationSet {
    pub thresholds: Thresholds,
    /// What the popularity policy resolved to; `None` when disabled.
    pub resolved_degree_threshold: Option<u32>,
    /// Diagnostic: context-matched pairs whose similarity was defined but
    /// fell below `gamma`. Not emitted, only counted.
    pub weak_context: u64,
    /// Diagnostic: context-matched pairs with a nonzero tie below `beta`
    /// that no other gate admitted.
    pub weak_relations: u64,
    recs: Vec<Recommendation>,
}

impl RecommendationSet {
    pub fn iter(&self) -> impl Iterator<Item = &Recommendation> {
        self.recs.iter()
    }

    pub fn len(&self) -> usize {
        self.recs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recs.is_empty()
    }

    pub fn stream(&self, stream: Stream) -> impl Iterator<Item = &Recommendation> {
        self.recs.iter().filter(move |r| r.stream == stream)
    }

    /// The (participant, session) decision pairs of one stream.
    pub fn pairs(&self, stream: Stream) -> BTreeSet<(PersonId, SessionId)> {
        self.stream(stream)
            .map(|r| (r.participant.clone(), r.session.clone()))
            .collect()
    }

    /// Canonical one-record-per-line text:
    /// `participant session stream score rank gate`.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for r in &self.recs {
            let _ = writeln!(
                out,
                "{} {} {} {:.6} {} {}",
                r.participant,
                r.session,
                r.stream.as_str(),
                r.score,
                r.rank,
                r.gate.as_str()
            );
        }
        out
    }

    /// Canonical text restricted to one stream.
    pub fn stream_text(&self, stream: Stream) -> String {
        let mut out = String::new();
        for r in self.stream(stream) {
            let _ = writeln!(
                out,
                "{} {} {} {:.6} {} {}",
                r.participant,
                r.session,
                r.stream.as_str(),
                r.score,
                r.rank,
                r.gate.as_str()
            );
        }
        out
    }
}

/// Engine variants. The baselines reuse the exact pair loop with one gate
/// removed so that comparisons isolate the gate, not the plumbing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Variant {
    /// Both streams, all gates, top-n truncation.
    Full,
    /// Context stream only, availability post-filter disabled, untruncated.
    PearsonOnly,
    /// Relations stream admitted solely by degree centrality, untruncated.
    PopularityOnly,
}

/// Run the full recommendation pipeline over a validated dataset.
///
/// Refuses datasets that fail validation. An empty presenter set yields an
/// empty set, not an error.
pub fn run_sarve(ds: &Dataset, thresholds: &Thresholds) -> Result<RecommendationSet, Error> {
    run_variant(ds, thresholds, Variant::Full)
}

pub(crate) fn run_variant(
    ds: &Dataset,
    thresholds: &Thresholds,
    variant: Variant,
) -> Result<RecommendationSet, Error> {
    thresholds.validate()?;
    let report = validate_dataset(ds);
    if !report.is_pass() {
        return Err(Error::InvalidDataset(report.to_string().trim_end().to_owned()));
    }

    let resolved_degree_threshold = match thresholds.degree_policy {
        DegreePolicy::Median => Some(median_presenter_degree(&ds.contacts, ds.presenters())),
        DegreePolicy::Fixed(t) => Some(t),
        DegreePolicy::Disabled => None,
    };

    let presenters: Vec<&PersonId> = ds.presenters().collect();
    let presenter_set: BTreeSet<PersonId> = presenters.iter().map(|p| (*p).clone()).collect();
    let sessions_by_presenter: BTreeMap<&PersonId, Vec<&Session>> = presenters
        .iter()
        .map(|p| (*p, ds.sessions_of(p)))
        .collect();

    let mut recs: Vec<Recommendation> = Vec::new();
    let mut weak_context = 0u64;
    let mut weak_relations = 0u64;

    for participant in ds.participants() {
        let windows = ds.windows_of(participant);

        // Optional k-nearest prefilter for the context stream. Disabled by
        // default, which matches the exhaustive pair loop.
        let eligible: Option<BTreeSet<PersonId>> = thresholds.k_neighbors.map(|k| {
            k_most_similar(&ds.ratings, participant, &presenter_set, k)
                .into_iter()
                .map(|s| s.presenter)
                .collect()
        });

        let mut context_entries: Vec<Recommendation> = Vec::new();
        let mut relations_entries: Vec<Recommendation> = Vec::new();

        for presenter in &presenters {
            let sessions = &sessions_by_presenter[*presenter];
            if sessions.is_empty() {
                continue;
            }
            let centrality = degree_centrality(&ds.contacts, presenter);

            // Social context: similarity gate, then availability.
            if variant != Variant::PopularityOnly {
                let in_scope = eligible
                    .as_ref()
                    .map_or(true, |set| set.contains(*presenter));
                if in_scope {
                    let similarity = pearson_lenient(&ds.ratings, presenter, participant);
                    let admitted = passes_gamma(&similarity, thresholds.gamma);
                    if admitted || similarity.value.is_some() {
                        for session in sessions {
                            let ctx_ok = variant == Variant::PearsonOnly
                                || match_context(participant, windows, session).matched;
                            if !ctx_ok {
                                continue;
                            }
                            if admitted {
                                context_entries.push(Recommendation {
                                    participant: participant.clone(),
                                    session: session.id.clone(),
                                    stream: Stream::Context,
                                    score: similarity.value.expect("gated on defined value"),
                                    gate: Gate::Gamma,
                                    presenter_degree: centrality.degree,
                                    rank: 0,
                                });
                            } else if variant == Variant::Full {
                                weak_context += 1;
                            }
                        }
                    }
                }
            }

            // Social relations: tie or popularity gate, then availability.
            if variant != Variant::PearsonOnly {
                let tie = tie_strength(&ds.contacts, presenter, participant)?;
                let by_beta =
                    variant != Variant::PopularityOnly && passes_beta(&tie, thresholds.beta);
                let by_popularity = resolved_degree_threshold
                    .is_some_and(|t| passes_popularity(&centrality, t));
                if by_beta || by_popularity {
                    let gate = match (by_beta, by_popularity) {
                        (true, true) => Gate::BetaPopularity,
                        (true, false) => Gate::Beta,
                        (false, true) => Gate::Popularity,
                        (false, false) => unreachable!(),
                    };
                    for session in sessions {
                        if match_context(participant, windows, session).matched {
                            relations_entries.push(Recommendation {
                                participant: participant.clone(),
                                session: session.id.clone(),
                                stream: Stream::Relations,
                                score: tie.value,
                                gate,
                                presenter_degree: centrality.degree,
                                rank: 0,
                            });
                        }
                    }
                } else if variant == Variant::Full && tie.value > 0.0 {
                    for session in sessions {
                        if match_context(participant, windows, session).matched {
                            weak_relations += 1;
                        }
                    }
                }
            }
        }

        // Context stream ranks by similarity; relations by tie strength with
        // popularity-only admissions (no tie evidence) after all beta
        // passers, then presenter degree, then session id.
        context_entries.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| a.session.cmp(&b.session))
        });
        relations_entries.sort_by(|a, b| {
            a.gate
                .popularity_only()
                .cmp(&b.gate.popularity_only())
                .then_with(|| b.score.total_cmp(&a.score))
                .then_with(|| b.presenter_degree.cmp(&a.presenter_degree))
                .then_with(|| a.session.cmp(&b.session))
        });

        let truncate_at = match variant {
            Variant::Full => thresholds.top_n,
            Variant::PearsonOnly | Variant::PopularityOnly => usize::MAX,
        };
        for entries in [&mut context_entries, &mut relations_entries] {
            entries.truncate(truncate_at);
            for (idx, entry) in entries.iter_mut().enumerate() {
                entry.rank = (idx + 1) as u32;
            }
        }
        recs.append(&mut context_entries);
        recs.append(&mut relations_entries);
    }

    // Canonical record order for serialization and diffing.
    recs.sort_by(|a, b| {
        a.participant
            .cmp(&b.participant)
            .then_with(|| a.stream.cmp(&b.stream))
            .then_with(|| a.rank.cmp(&b.rank))
    });

    Ok(RecommendationSet {
        thresholds: thresholds.clone(),
        resolved_degree_threshold,
        weak_context,
        weak_relations,
        recs,
    })
}

/// One kept session in a participant's conflict-free schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduledSession {
    pub session: SessionId,
    pub combined_score: f64,
}

/// One recommendation dropped because it overlapped a stronger one.
#[derive(Clone, Debug, PartialEq)]
pub struct DroppedSession {
    pub session: SessionId,
    pub combined_score: f64,
    pub conflict_with: SessionId,
}

/// Per-participant conflict-free schedule plus the annotated drops.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScheduleProposal {
    pub participants: BTreeMap<PersonId, (Vec<ScheduledSession>, Vec<DroppedSession>)>,
}

impl ScheduleProposal {
    /// Canonical text: `participant keep|drop session score [conflict_with]`.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (participant, (kept, dropped)) in &self.participants {
            for k in kept {
                let _ = writeln!(out, "{participant} keep {} {:.6}", k.session, k.combined_score);
            }
            for d in dropped {
                let _ = writeln!(
                    out,
                    "{participant} drop {} {:.6} conflicts-with {}",
                    d.session, d.combined_score, d.conflict_with
                );
            }
        }
        out
    }
}

/// Normalize a recommendation's score into [0, 1] so the two streams are
/// comparable: Pearson maps through `(v + 1) / 2`, tie values clamp.
fn combined_score(rec: &Recommendation) -> f64 {
    match rec.stream {
        Stream::Context => (rec.score + 1.0) / 2.0,
        Stream::Relations => rec.score.clamp(0.0, 1.0),
    }
}

/// Resolve time conflicts inside a recommendation set: per participant,
/// greedily keep the highest combined-score session among overlapping ones.
/// A participant cannot sit in two venues at once, so overlap is temporal
/// regardless of room. Dropped sessions stay in the output, annotated with
/// the kept session they collided with.
pub fn resolve_conflicts(
    recs: &RecommendationSet,
    sessions: &BTreeMap<SessionId, Session>,
) -> ScheduleProposal {
    // Best combined score per (participant, session) across both streams.
    let mut best: BTreeMap<(PersonId, SessionId), f64> = BTreeMap::new();
    for rec in recs.iter() {
        let score = combined_score(rec);
        best.entry((rec.participant.clone(), rec.session.clone()))
            .and_modify(|s| *s = s.max(score))
            .or_insert(score);
    }

    let mut per_participant: BTreeMap<PersonId, Vec<(SessionId, f64)>> = BTreeMap::new();
    for ((participant, session), score) in best {
        per_participant
            .entry(participant)
            .or_default()
            .push((session, score));
    }

    let mut proposal = ScheduleProposal::default();
    for (participant, mut candidates) in per_participant {
        candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

        let mut kept: Vec<ScheduledSession> = Vec::new();
        let mut dropped: Vec<DroppedSession> = Vec::new();
        for (session_id, score) in candidates {
            let Some(session) = sessions.get(&session_id) else {
                continue;
            };
            let clash = kept.iter().find(|k| {
                sessions
                    .get(&k.session)
                    .is_some_and(|ks| ks.overlaps(session))
            });
            match clash {
                Some(winner) => dropped.push(DroppedSession {
                    session: session_id,
                    combined_score: score,
                    conflict_with: winner.session.clone(),
                }),
                None => kept.push(ScheduledSession {
                    session: session_id,
                    combined_score: score,
                }),
            }
        }
        // Chronological order reads better in a schedule.
        kept.sort_by(|a, b| {
            let (sa, sb) = (&sessions[&a.session], &sessions[&b.session]);
            sa.start.cmp(&sb.start).then_with(|| a.session.cmp(&b.session))
        });
        dropped.sort_by(|a, b| a.session.cmp(&b.session));
        proposal.participants.insert(participant, (kept, dropped));
    }
    proposal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Contact, ItemId, Role, RoomId, Window};

    fn person(ds: &mut Dataset, id: &str, role: Role) {
        ds.persons.insert(PersonId::from(id), role);
    }

    fn rate(ds: &mut Dataset, person: &str, item: &str, rating: u8) {
        ds.items.insert(ItemId::from(item));
        ds.ratings
            .insert(PersonId::from(person), ItemId::from(item), rating);
    }

    fn add_session(ds: &mut Dataset, id: &str, presenter: &str, room: &str, start: u32, dur: u32) {
        ds.sessions.insert(
            SessionId::from(id),
            Session {
                id: SessionId::from(id),
                presenter: PersonId::from(presenter),
                room: RoomId::from(room),
                start,
                duration_min: dur,
            },
        );
    }

    fn all_day(ds: &mut Dataset, person: &str, room: &str) {
        ds.availability
            .entry(PersonId::from(person))
            .or_default()
            .push(Window {
                room: RoomId::from(room),
                start: 0,
                end: ds.t_total,
            });
    }

    /// One presenter, one participant, identical ratings, full availability.
    fn open_gate_dataset() -> Dataset {
        let mut ds = Dataset::empty(720);
        ds.rooms.insert(RoomId::from("RoomA"));
        person(&mut ds, "pa1", Role::Participant);
        person(&mut ds, "pr1", Role::Presenter);
        for (item, rating) in [("i1", 1), ("i2", 3), ("i3", 5)] {
            rate(&mut ds, "pa1", item, rating);
            rate(&mut ds, "pr1", item, rating);
        }
        add_session(&mut ds, "s1", "pr1", "RoomA", 60, 25);
        all_day(&mut ds, "pa1", "RoomA");
        ds
    }

    #[test]
    fn all_gates_open_yields_one_context_recommendation() {
        let ds = open_gate_dataset();
        let th = Thresholds {
            degree_policy: DegreePolicy::Disabled,
            ..Thresholds::default()
        };
        let recs = run_sarve(&ds, &th).unwrap();
        let context: Vec<&Recommendation> = recs.stream(Stream::Context).collect();
        assert_eq!(context.len(), 1);
        assert_eq!(context[0].session, SessionId::from("s1"));
        assert!((context[0].score - 1.0).abs() < 1e-9);
        assert_eq!(context[0].gate, Gate::Gamma);
        assert_eq!(context[0].rank, 1);
    }

    #[test]
    fn weak_tie_and_unpopular_presenter_yield_no_relations_recommendation() {
        // Tie 300/660 = 0.4545 < beta 0.5, degree 1 below a fixed threshold 5.
        let mut ds = open_gate_dataset();
        ds.t_total = 660;
        ds.contacts = crate::domain::ContactLog::new(660);
        ds.contacts.insert(
            PersonId::from("pr1"),
            PersonId::from("pa1"),
            Contact { duration_min: 60, frequency: 5 },
        );
        // Re-fit availability to the shorter day.
        ds.availability.clear();
        all_day(&mut ds, "pa1", "RoomA");
        let th = Thresholds {
            degree_policy: DegreePolicy::Fixed(5),
            ..Thresholds::default()
        };
        let recs = run_sarve(&ds, &th).unwrap();
        assert_eq!(recs.stream(Stream::Relations).count(), 0);
    }

    #[test]
    fn strong_tie_passes_beta_gate() {
        let mut ds = open_gate_dataset();
        ds.contacts.insert(
            PersonId::from("pr1"),
            PersonId::from("pa1"),
            Contact { duration_min: 80, frequency: 7 },
        );
        let th = Thresholds {
            degree_policy: DegreePolicy::Disabled,
            ..Thresholds::default()
        };
        let recs = run_sarve(&ds, &th).unwrap();
        let relations: Vec<&Recommendation> = recs.stream(Stream::Relations).collect();
        assert_eq!(relations.len(), 1);
        assert_eq!(relations[0].gate, Gate::Beta);
        assert!((relations[0].score - 560.0 / 720.0).abs() < 1e-12);
    }

    #[test]
    fn popularity_alone_admits_below_beta_ties() {
        let mut ds = open_gate_dataset();
        ds.contacts.insert(
            PersonId::from("pr1"),
            PersonId::from("pa1"),
            Contact { duration_min: 10, frequency: 1 },
        );
        let th = Thresholds {
            degree_policy: DegreePolicy::Fixed(1),
            gamma: 1.5_f64.min(1.0), // keep context stream possible but irrelevant here
            ..Thresholds::default()
        };
        let recs = run_sarve(&ds, &th).unwrap();
        let relations: Vec<&Recommendation> = recs.stream(Stream::Relations).collect();
        assert_eq!(relations.len(), 1);
        assert_eq!(relations[0].gate, Gate::Popularity);
        assert!(relations[0].score < th.beta);
    }

    #[test]
    fn empty_presenter_set_is_an_empty_result() {
        let mut ds = Dataset::empty(720);
        ds.rooms.insert(RoomId::from("RoomA"));
        person(&mut ds, "pa1", Role::Participant);
        rate(&mut ds, "pa1", "i1", 3);
        let recs = run_sarve(&ds, &Thresholds::default()).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn invalid_dataset_is_refused() {
        let mut ds = open_gate_dataset();
        ds.ratings.insert(PersonId::from("pa1"), ItemId::from("i1"), 9);
        assert!(matches!(
            run_sarve(&ds, &Thresholds::default()),
            Err(Error::InvalidDataset(_))
        ));
    }

    #[test]
    fn unavailable_participant_gets_nothing() {
        let mut ds = open_gate_dataset();
        ds.availability.clear();
        ds.availability.insert(
            PersonId::from("pa1"),
            vec![Window { room: RoomId::from("RoomA"), start: 0, end: 30 }],
        );
        let recs = run_sarve(&ds, &Thresholds::default()).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn top_n_truncates_each_stream_per_participant() {
        let mut ds = Dataset::empty(720);
        ds.rooms.insert(RoomId::from("RoomA"));
        person(&mut ds, "pa1", Role::Participant);
        for n in 0..5 {
            let pr = format!("pr{n}");
            person(&mut ds, &pr, Role::Presenter);
            for (item, rating) in [("i1", 1), ("i2", 3), ("i3", 5)] {
                rate(&mut ds, &pr, item, rating);
            }
            add_session(&mut ds, &format!("s{n}"), &pr, "RoomA", (n as u32) * 30, 25);
        }
        for (item, rating) in [("i1", 1), ("i2", 3), ("i3", 5)] {
            rate(&mut ds, "pa1", item, rating);
        }
        all_day(&mut ds, "pa1", "RoomA");
        let th = Thresholds {
            top_n: 2,
            degree_policy: DegreePolicy::Disabled,
            ..Thresholds::default()
        };
        let recs = run_sarve(&ds, &th).unwrap();
        assert_eq!(recs.stream(Stream::Context).count(), 2);
        let ranks: Vec<u32> = recs.stream(Stream::Context).map(|r| r.rank).collect();
        assert_eq!(ranks, vec![1, 2]);
    }

    #[test]
    fn below_threshold_evidence_is_counted_as_weak() {
        // Tie 0.4545 < beta 0.5 and similarity 1.0 with gamma raised to
        // an unreachable 1.0-epsilon: nothing emitted, both counted.
        let mut ds = open_gate_dataset();
        ds.contacts.insert(
            PersonId::from("pr1"),
            PersonId::from("pa1"),
            Contact { duration_min: 60, frequency: 5 },
        );
        let th = Thresholds {
            gamma: 0.6,
            degree_policy: DegreePolicy::Disabled,
            ..Thresholds::default()
        };
        let recs = run_sarve(&ds, &th).unwrap();
        assert_eq!(recs.weak_relations, 1, "tie 300/720 sits below beta");
        assert_eq!(recs.weak_context, 0);

        let th_strict = Thresholds { gamma: 1.0, ..th };
        let recs = run_sarve(&ds, &th_strict).unwrap();
        // Similarity is exactly 1.0 here, so the inclusive gate still
        // admits; push gamma via a colder pair instead.
        assert_eq!(recs.stream(Stream::Context).count(), 1);

        let mut ds_cold = ds.clone();
        ds_cold.ratings.insert(PersonId::from("pa1"), ItemId::from("i1"), 2);
        let recs = run_sarve(&ds_cold, &th_strict).unwrap();
        assert_eq!(recs.stream(Stream::Context).count(), 0);
        assert_eq!(recs.weak_context, 1, "defined similarity below gamma");
    }

    #[test]
    fn k_neighbors_caps_context_stream_eligibility() {
        let mut ds = Dataset::empty(720);
        ds.rooms.insert(RoomId::from("RoomA"));
        person(&mut ds, "pa1", Role::Participant);
        // pr0 correlates perfectly, pr1 imperfectly but above gamma.
        person(&mut ds, "pr0", Role::Presenter);
        person(&mut ds, "pr1", Role::Presenter);
        for (item, rating) in [("i1", 1), ("i2", 3), ("i3", 5)] {
            rate(&mut ds, "pa1", item, rating);
            rate(&mut ds, "pr0", item, rating);
        }
        for (item, rating) in [("i1", 1), ("i2", 4), ("i3", 4)] {
            rate(&mut ds, "pr1", item, rating);
        }
        add_session(&mut ds, "s0", "pr0", "RoomA", 0, 25);
        add_session(&mut ds, "s1", "pr1", "RoomA", 100, 25);
        all_day(&mut ds, "pa1", "RoomA");

        let th = Thresholds {
            gamma: 0.5,
            degree_policy: DegreePolicy::Disabled,
            ..Thresholds::default()
        };
        let unrestricted = run_sarve(&ds, &th).unwrap();
        assert_eq!(unrestricted.stream(Stream::Context).count(), 2);

        let th_capped = Thresholds { k_neighbors: Some(1), ..th };
        let capped = run_sarve(&ds, &th_capped).unwrap();
        let kept: Vec<&Recommendation> = capped.stream(Stream::Context).collect();
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].session, SessionId::from("s0"), "only the nearest neighbor survives");
    }

    #[test]
    fn runs_are_deterministic() {
        let ds = open_gate_dataset();
        let th = Thresholds::default();
        let a = run_sarve(&ds, &th).unwrap();
        let b = run_sarve(&ds, &th).unwrap();
        assert_eq!(a.canonical_text(), b.canonical_text());
    }

    fn simple_sessions(specs: &[(&str, u32, u32)]) -> BTreeMap<SessionId, Session> {
        specs
            .iter()
            .map(|(id, start, dur)| {
                (
                    SessionId::from(*id),
                    Session {
                        id: SessionId::from(*id),
                        presenter: PersonId::from("pr"),
                        room: RoomId::from("RoomA"),
                        start: *start,
                        duration_min: *dur,
                    },
                )
            })
            .collect()
    }

    fn rec(participant: &str, session: &str, stream: Stream, score: f64) -> Recommendation {
        Recommendation {
            participant: PersonId::from(participant),
            session: SessionId::from(session),
            stream,
            score,
            gate: match stream {
                Stream::Context => Gate::Gamma,
                Stream::Relations => Gate::Beta,
            },
            presenter_degree: 0,
            rank: 1,
        }
    }

    fn set_of(recs: Vec<Recommendation>) -> RecommendationSet {
        RecommendationSet {
            thresholds: Thresholds::default(),
            resolved_degree_threshold: None,
            weak_context: 0,
            weak_relations: 0,
            recs,
        }
    }

    #[test]
    fn disjoint_sessions_are_both_kept() {
        let sessions = simple_sessions(&[("s1", 0, 25), ("s2", 100, 25)]);
        let recs = set_of(vec![
            rec("pa1", "s1", Stream::Relations, 0.6),
            rec("pa1", "s2", Stream::Relations, 0.9),
        ]);
        let proposal = resolve_conflicts(&recs, &sessions);
        let (kept, dropped) = &proposal.participants[&PersonId::from("pa1")];
        assert_eq!(kept.len(), 2);
        assert!(dropped.is_empty());
        // Chronological output order.
        assert_eq!(kept[0].session, SessionId::from("s1"));
    }

    #[test]
    fn overlapping_sessions_keep_the_higher_combined_score() {
        let sessions = simple_sessions(&[("s1", 0, 60), ("s2", 30, 60)]);
        let recs = set_of(vec![
            rec("pa1", "s1", Stream::Context, 0.8),  // combined (0.8+1)/2 = 0.9
            rec("pa1", "s2", Stream::Relations, 0.4), // combined 0.4
        ]);
        let proposal = resolve_conflicts(&recs, &sessions);
        let (kept, dropped) = &proposal.participants[&PersonId::from("pa1")];
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].session, SessionId::from("s1"));
        assert_eq!(dropped.len(), 1);
        assert_eq!(dropped[0].session, SessionId::from("s2"));
        assert_eq!(dropped[0].conflict_with, SessionId::from("s1"));
    }

    #[test]
    fn clique_resolution_matches_exhaustive_search() {
        // All sessions overlap pairwise, so any conflict-free subset holds at
        // most one; the greedy pick must equal the brute-force optimum.
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next_unit = || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let n = 5;
            let specs: Vec<(String, u32, u32)> =
                (0..n).map(|i| (format!("s{i}"), 0, 100)).collect();
            let sessions: BTreeMap<SessionId, Session> = specs
                .iter()
                .map(|(id, start, dur)| {
                    (
                        SessionId::from(id.as_str()),
                        Session {
                            id: SessionId::from(id.as_str()),
                            presenter: PersonId::from("pr"),
                            room: RoomId::from("RoomA"),
                            start: *start,
                            duration_min: *dur,
                        },
                    )
                })
                .collect();
            let scores: Vec<f64> = (0..n).map(|_| next_unit()).collect();
            let recs = set_of(
                specs
                    .iter()
                    .zip(&scores)
                    .map(|((id, _, _), score)| {
                        rec("pa1", id, Stream::Relations, *score)
                    })
                    .collect(),
            );
            let proposal = resolve_conflicts(&recs, &sessions);
            let (kept, dropped) = &proposal.participants[&PersonId::from("pa1")];

            // Brute force over all subsets: max total score, conflict-free.
            let mut best_total = 0.0f64;
            for mask in 0u32..(1 << n) {
                let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                let conflict = chosen.iter().enumerate().any(|(a, &i)| {
                    chosen[a + 1..].iter().any(|&j| {
                        sessions[&SessionId::from(format!("s{i}").as_str())]
                            .overlaps(&sessions[&SessionId::from(format!("s{j}").as_str())])
                    })
                });
                if !conflict {
                    let total: f64 = chosen.iter().map(|&i| scores[i].clamp(0.0, 1.0)).sum();
                    best_total = best_total.max(total);
                }
            }
            let kept_total: f64 = kept.iter().map(|k| k.combined_score).sum();
            assert!((kept_total - best_total).abs() < 1e-12);
            assert_eq!(kept.len() + dropped.len(), n);
        }
    }
}
