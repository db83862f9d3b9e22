//! Seeded synthetic dataset generator.
//!
//! The generator reproduces the published shape of a two-room, 720-minute
//! conference: 60 presenters with five contacts each, 78 participants,
//! contact durations in [5, 80] minutes, contact frequencies in [1, 7], and
//! tagged ratings in [1, 5].
//!
//! Persons are assigned to latent interest clusters. Each cluster owns a
//! base rating profile; a person's rating is the profile value plus small
//! noise, so within-cluster rating vectors correlate strongly and
//! cross-cluster vectors do not. The clusters also supply relevance ground
//! truth without circularity: a session is relevant to a participant when
//! its presenter shares the participant's cluster and the participant's
//! availability covers the slot.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::match_context;
use crate::domain::{
    Contact, Dataset, ItemId, PersonId, Role, RoomId, Session, SessionId, Window,
};
use crate::Error;

/// Shape parameters for a generated dataset. Defaults mirror the reference
/// conference figures exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub n_presenters: usize,
    pub n_participants: usize,
    pub contacts_per_presenter: usize,
    /// Inclusive contact duration range, minutes.
    pub duration_range: (u32, u32),
    /// Inclusive contact frequency range.
    pub frequency_range: (u32, u32),
    /// Inclusive tagged rating range.
    pub rating_range: (u8, u8),
    /// Conference time frame T, minutes.
    pub t_total: u32,
    pub rooms: Vec<String>,
    /// Full-paper slot: 20 minutes plus 5 for questions.
    pub full_session_min: u32,
    /// Short-paper slot: 15 minutes plus 5 for questions.
    pub short_session_min: u32,
    /// Number of keyword items in the rating vocabulary.
    pub n_items: usize,
    pub n_interest_clusters: usize,
    pub seed: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self {
            n_presenters: 60,
            n_participants: 78,
            contacts_per_presenter: 5,
            duration_range: (5, 80),
            frequency_range: (1, 7),
            rating_range: (1, 5),
            t_total: 720,
            rooms: vec!["RoomA".to_string(), "RoomB".to_string()],
            full_session_min: 25,
            short_session_min: 20,
            n_items: 40,
            n_interest_clusters: 4,
            seed: 0,
        }
    }
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<(), Error> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidConfig(msg.to_string()))
            }
        };
        check(self.n_presenters > 0, "n_presenters must be >= 1")?;
        check(self.n_participants > 0, "n_participants must be >= 1")?;
        check(
            self.contacts_per_presenter <= self.n_participants,
            "contacts_per_presenter cannot exceed n_participants",
        )?;
        check(self.duration_range.0 <= self.duration_range.1, "empty duration range")?;
        check(self.frequency_range.0 <= self.frequency_range.1, "empty frequency range")?;
        check(
            self.rating_range.0 >= 1 && self.rating_range.0 <= self.rating_range.1,
            "rating range must sit within [1, 255] and be non-empty",
        )?;
        check(self.t_total > 0, "t_total must be positive")?;
        check(!self.rooms.is_empty(), "at least one room is required")?;
        check(self.full_session_min > 0 && self.short_session_min > 0, "session slots must be positive")?;
        check(self.n_items > 0, "n_items must be >= 1")?;
        check(self.n_interest_clusters > 0, "n_interest_clusters must be >= 1")?;
        Ok(())
    }
}

fn width(n: usize) -> usize {
    n.to_string().len().max(2)
}

/// Generate a dataset from the spec. Identical specs (including the seed)
/// produce byte-identical canonical serializations.
pub fn generate(spec: &GeneratorSpec) -> Result<Dataset, Error> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut ds = Dataset::empty(spec.t_total);

    for room in &spec.rooms {
        ds.rooms.insert(RoomId::from(room.as_str()));
    }

    let presenter_width = width(spec.n_presenters);
    let participant_width = width(spec.n_participants);
    let presenters: Vec<PersonId> = (0..spec.n_presenters)
        .map(|i| PersonId::from(format!("pr{:0w$}", i + 1, w = presenter_width).as_str()))
        .collect();
    let participants: Vec<PersonId> = (0..spec.n_participants)
        .map(|i| PersonId::from(format!("pa{:0w$}", i + 1, w = participant_width).as_str()))
        .collect();
    for p in &presenters {
        ds.persons.insert(p.clone(), Role::Presenter);
    }
    for p in &participants {
        ds.persons.insert(p.clone(), Role::Participant);
    }

    // Round-robin cluster assignment keeps clusters balanced for any count.
    let k = spec.n_interest_clusters;
    let cluster_of = |idx: usize| idx % k;
    let mut clusters: BTreeMap<PersonId, usize> = BTreeMap::new();
    for (idx, p) in presenters.iter().enumerate() {
        clusters.insert(p.clone(), cluster_of(idx));
    }
    for (idx, p) in participants.iter().enumerate() {
        clusters.insert(p.clone(), cluster_of(idx));
    }

    let items: Vec<ItemId> = (0..spec.n_items)
        .map(|i| ItemId::from(format!("kw{:0w$}", i + 1, w = width(spec.n_items)).as_str()))
        .collect();
    for item in &items {
        ds.items.insert(item.clone());
    }

    // Cluster rating profiles: one base value per (cluster, item).
    let (rating_lo, rating_hi) = spec.rating_range;
    let mut profiles: Vec<Vec<u8>> = Vec::with_capacity(k);
    for _ in 0..k {
        profiles.push(
            (0..spec.n_items)
                .map(|_| rng.random_range(rating_lo..=rating_hi))
                .collect(),
        );
    }

    // Dense ratings: profile value plus {-1, 0, +1} noise, clamped to range.
    let mut all_persons: Vec<&PersonId> = presenters.iter().chain(participants.iter()).collect();
    all_persons.sort();
    for person in &all_persons {
        let profile = &profiles[clusters[*person]];
        for (idx, item) in items.iter().enumerate() {
            let noise: i16 = match rng.random_range(0..4u8) {
                0 => -1,
                1 | 2 => 0,
                _ => 1,
            };
            let value = (i16::from(profile[idx]) + noise)
                .clamp(i16::from(rating_lo), i16::from(rating_hi)) as u8;
            ds.ratings.insert((*person).clone(), item.clone(), value);
        }
    }

    // Contacts: each presenter logs a fixed number of distinct participants,
    // biased toward their own cluster.
    let (dur_lo, dur_hi) = spec.duration_range;
    let (freq_lo, freq_hi) = spec.frequency_range;
    for presenter in &presenters {
        let own_cluster = clusters[presenter];
        let same: Vec<&PersonId> = participants
            .iter()
            .filter(|x| clusters[*x] == own_cluster)
            .collect();
        let mut chosen: Vec<PersonId> = Vec::with_capacity(spec.contacts_per_presenter);
        while chosen.len() < spec.contacts_per_presenter {
            let pool: &[&PersonId] = if !same.is_empty() && rng.random_range(0..10u8) < 8 {
                &same
            } else {
                &participants.iter().collect::<Vec<_>>()
            };
            let candidate = (*pool.choose(&mut rng).expect("pool non-empty")).clone();
            if !chosen.contains(&candidate) {
                chosen.push(candidate);
            } else if chosen.len() + same.len() < spec.contacts_per_presenter {
                // Tiny cluster: fall back to the global pool to guarantee
                // enough distinct partners.
                let candidate = participants
                    .iter()
                    .find(|x| !chosen.contains(x))
                    .expect("contacts_per_presenter <= n_participants")
                    .clone();
                chosen.push(candidate);
            }
        }
        for participant in chosen {
            ds.contacts.insert(
                presenter.clone(),
                participant,
                Contact {
                    duration_min: rng.random_range(dur_lo..=dur_hi),
                    frequency: rng.random_range(freq_lo..=freq_hi),
                },
            );
        }
    }

    // Sessions: one per presenter, full or short slot, packed first-fit
    // into the rooms by start time. Tracks run in parallel across rooms.
    let rooms: Vec<RoomId> = spec.rooms.iter().map(|r| RoomId::from(r.as_str())).collect();
    let mut next_free: Vec<u32> = vec![0; rooms.len()];
    let session_width = width(spec.n_presenters);
    for (idx, presenter) in presenters.iter().enumerate() {
        let duration = if rng.random_bool(0.5) {
            spec.full_session_min
        } else {
            spec.short_session_min
        };
        let room_idx = (0..rooms.len())
            .min_by_key(|&r| (next_free[r], r))
            .expect("rooms non-empty");
        let start = next_free[room_idx];
        if start + duration > spec.t_total {
            return Err(Error::Capacity(format!(
                "{} sessions do not fit {} room(s) within {} minutes",
                spec.n_presenters,
                rooms.len(),
                spec.t_total
            )));
        }
        next_free[room_idx] = start + duration;
        let id = SessionId::from(format!("s{:0w$}", idx + 1, w = session_width).as_str());
        ds.sessions.insert(
            id.clone(),
            Session {
                id,
                presenter: presenter.clone(),
                room: rooms[room_idx].clone(),
                start,
                duration_min: duration,
            },
        );
    }

    // Availability: participants declare one generous window per room (some
    // rooms skipped), presenters are available exactly for their own slot.
    for participant in &participants {
        let mut windows = Vec::new();
        for room in &rooms {
            if rng.random_range(0..10u8) < 8 {
                let latest_start = spec.t_total / 4;
                let start = rng.random_range(0..=latest_start);
                let earliest_end = (spec.t_total * 3) / 4;
                let end = rng.random_range(earliest_end..=spec.t_total);
                windows.push(Window {
                    room: room.clone(),
                    start,
                    end,
                });
            }
        }
        windows.sort();
        if !windows.is_empty() {
            ds.availability.insert(participant.clone(), windows);
        }
    }
    for session in ds.sessions.clone().values() {
        ds.availability
            .entry(session.presenter.clone())
            .or_default()
            .push(Window {
                room: session.room.clone(),
                start: session.start,
                end: session.end(),
            });
    }
    for windows in ds.availability.values_mut() {
        windows.sort();
    }

    // Relevance labels: same-cluster sessions the participant can attend.
    for participant in &participants {
        let windows = ds.windows_of(participant).to_vec();
        for session in ds.sessions.values() {
            if clusters[&session.presenter] == clusters[participant]
                && match_context(participant, &windows, session).matched
            {
                ds.labels.insert((participant.clone(), session.id.clone()));
            }
        }
    }

    Ok(ds)
}

/// Histogram views of the three dataset trend panels: contact durations,
/// tagged ratings, and contact frequencies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistributionSummary {
    pub durations: BTreeMap<u32, u64>,
    pub ratings: BTreeMap<u8, u64>,
    pub frequencies: BTreeMap<u32, u64>,
}

impl DistributionSummary {
    /// Canonical tabular text, one `value count` row per bin.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        out.push_str("[duration_minutes]\n");
        for (value, count) in &self.durations {
            let _ = writeln!(out, "{value} {count}");
        }
        out.push_str("\n[ratings]\n");
        for (value, count) in &self.ratings {
            let _ = writeln!(out, "{value} {count}");
        }
        out.push_str("\n[frequencies]\n");
        for (value, count) in &self.frequencies {
            let _ = writeln!(out, "{value} {count}");
        }
        out
    }
}

/// Tabulate the distribution histograms of a dataset.
pub fn summarize(ds: &Dataset) -> DistributionSummary {
    let mut summary = DistributionSummary::default();
    for (_, contact) in ds.contacts.iter() {
        *summary.durations.entry(contact.duration_min).or_insert(0) += 1;
        *summary.frequencies.entry(contact.frequency).or_insert(0) += 1;
    }
    for (_, _, rating) in ds.ratings.iter() {
        *summary.ratings.entry(rating).or_insert(0) += 1;
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::validate_dataset;
    use crate::similarity::pearson_lenient;

    #[test]
    fn default_spec_matches_published_shape() {
        let spec = GeneratorSpec { seed: 42, ..GeneratorSpec::default() };
        let ds = generate(&spec).unwrap();
        assert_eq!(ds.presenters().count(), 60);
        assert_eq!(ds.participants().count(), 78);
        assert_eq!(ds.t_total, 720);
        assert_eq!(ds.rooms.len(), 2);
        assert_eq!(ds.sessions.len(), 60);
        for presenter in ds.presenters() {
            let count = ds.contacts.iter().filter(|((p, _), _)| p == presenter).count();
            assert_eq!(count, 5, "presenter {presenter}");
        }
        for (_, contact) in ds.contacts.iter() {
            assert!((5..=80).contains(&contact.duration_min));
            assert!((1..=7).contains(&contact.frequency));
        }
        for (_, _, rating) in ds.ratings.iter() {
            assert!((1..=5).contains(&rating));
        }
        let report = validate_dataset(&ds);
        assert!(report.is_pass(), "{report}");
    }

    #[test]
    fn generation_is_byte_reproducible() {
        let spec = GeneratorSpec { seed: 7, ..GeneratorSpec::default() };
        let a = crate::format::serialize_dataset(&generate(&spec).unwrap());
        let b = crate::format::serialize_dataset(&generate(&spec).unwrap());
        assert_eq!(a, b);
        let other = GeneratorSpec { seed: 8, ..GeneratorSpec::default() };
        let c = crate::format::serialize_dataset(&generate(&other).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn tie_values_respect_the_range_envelope() {
        let ds = generate(&GeneratorSpec { seed: 3, ..GeneratorSpec::default() }).unwrap();
        let bound = 560.0 / 720.0; // max frequency x max duration over T
        for ((p, x), _) in ds.contacts.iter() {
            let tie = crate::social::tie_strength(&ds.contacts, p, x).unwrap();
            assert!(tie.value <= bound + 1e-12);
        }
    }

    #[test]
    fn clusters_separate_within_from_cross_pairs() {
        for seed in [1u64, 2, 3] {
            let spec = GeneratorSpec {
                n_presenters: 10,
                n_participants: 16,
                n_items: 20,
                seed,
                ..GeneratorSpec::default()
            };
            let ds = generate(&spec).unwrap();
            let persons: Vec<PersonId> = ds.persons.keys().cloned().collect();
            let cluster = |id: &PersonId| -> usize {
                // Mirror the generator's round-robin assignment from the id's
                // ordinal suffix.
                let digits: String = id.as_str().chars().filter(char::is_ascii_digit).collect();
                (digits.parse::<usize>().unwrap() - 1) % spec.n_interest_clusters
            };
            let mut within = Vec::new();
            let mut cross = Vec::new();
            for (i, a) in persons.iter().enumerate() {
                for b in persons.iter().skip(i + 1) {
                    // Same-prefix comparison keeps presenter/participant
                    // numbering aligned with cluster assignment.
                    if a.as_str()[..2] != b.as_str()[..2] {
                        continue;
                    }
                    if let Some(v) = pearson_lenient(&ds.ratings, a, b).value {
                        if cluster(a) == cluster(b) {
                            within.push(v);
                        } else {
                            cross.push(v);
                        }
                    }
                }
            }
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let (mw, mc) = (mean(&within), mean(&cross));
            println!("seed {seed}: within-cluster mean {mw:.3}, cross-cluster mean {mc:.3}");
            assert!(
                mw > mc,
                "within-cluster correlation must exceed cross-cluster (seed {seed}: {mw} vs {mc})"
            );
        }
    }

    #[test]
    fn labels_point_at_attendable_same_cluster_sessions() {
        let ds = generate(&GeneratorSpec { seed: 11, ..GeneratorSpec::default() }).unwrap();
        assert!(!ds.labels.is_empty());
        for (participant, session_id) in &ds.labels {
            let session = &ds.sessions[session_id];
            let windows = ds.windows_of(participant);
            assert!(match_context(participant, windows, session).matched);
        }
    }

    #[test]
    fn infeasible_packing_is_a_capacity_error() {
        let spec = GeneratorSpec {
            n_presenters: 10,
            n_participants: 10,
            contacts_per_presenter: 2,
            t_total: 60,
            ..GeneratorSpec::default()
        };
        assert!(matches!(generate(&spec), Err(Error::Capacity(_))));
    }

    #[test]
    fn sessions_never_overlap_within_a_room() {
        let ds = generate(&GeneratorSpec { seed: 13, ..GeneratorSpec::default() }).unwrap();
        let sessions: Vec<&Session> = ds.sessions.values().collect();
        for (i, a) in sessions.iter().enumerate() {
            for b in sessions.iter().skip(i + 1) {
                if a.room.matches(&b.room) {
                    assert!(!a.overlaps(b), "{} overlaps {}", a.id, b.id);
                }
            }
        }
    }

    #[test]
    fn summary_totals_equal_record_counts() {
        let ds = generate(&GeneratorSpec { seed: 17, ..GeneratorSpec::default() }).unwrap();
        let summary = summarize(&ds);
        let durations: u64 = summary.durations.values().sum();
        let ratings: u64 = summary.ratings.values().sum();
        let frequencies: u64 = summary.frequencies.values().sum();
        assert_eq!(durations, ds.contacts.len() as u64);
        assert_eq!(frequencies, ds.contacts.len() as u64);
        assert_eq!(ratings, ds.ratings.len() as u64);
        // Supports stay inside the generator envelope.
        assert!(summary.durations.keys().all(|d| (5..=80).contains(d)));
        assert!(summary.frequencies.keys().all(|f| (1..=7).contains(f)));
        assert!(summary.ratings.keys().all(|r| (1..=5).contains(r)));
    }

    #[test]
    fn uniform_ratings_collapse_to_one_bin() {
        let mut ds = Dataset::empty(720);
        ds.rooms.insert(RoomId::from("RoomA"));
        ds.persons.insert(PersonId::from("pa1"), Role::Participant);
        ds.items.insert(ItemId::from("i1"));
        ds.items.insert(ItemId::from("i2"));
        ds.ratings.insert(PersonId::from("pa1"), ItemId::from("i1"), 3);
        ds.ratings.insert(PersonId::from("pa1"), ItemId::from("i2"), 3);
        let summary = summarize(&ds);
        assert_eq!(summary.ratings.len(), 1);
        assert_eq!(summary.ratings[&3], 2);
    }
}
