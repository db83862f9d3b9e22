//! Core entity and matrix types shared by every other module, plus schema
//! validation for whole datasets.
//!
//! All types here are immutable after load: mutation happens at parse or
//! construction time only, so values can be shared read-only across workers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Version of the canonical dataset schema this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(id: &str) -> Self {
                Self(id.to_owned())
            }
        }
    };
}

id_type!(
    /// Opaque identifier for a person (participant or presenter).
    PersonId
);
id_type!(
    /// Opaque identifier for a tag/keyword item in the rating matrix.
    ItemId
);
id_type!(
    /// Opaque identifier for a presentation session.
    SessionId
);
id_type!(
    /// Opaque identifier for a session room.
    ///
    /// Comparison for context matching goes through [`RoomId::matches`],
    /// which trims and case-folds both sides; raw spelling is preserved for
    /// serialization.
    RoomId
);

impl RoomId {
    /// Trimmed, case-folded form used for equality during matching.
    pub fn normalized(&self) -> String {
        self.0.trim().to_lowercase()
    }

    /// Room equality up to whitespace and letter case.
    pub fn matches(&self, other: &RoomId) -> bool {
        self.normalized() == other.normalized()
    }
}

/// A person's role at the conference. Presenters also rate items and hold
/// availability, so they participate in every matrix a participant does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    Participant,
    Presenter,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Participant => "participant",
            Role::Presenter => "presenter",
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "participant" => Ok(Role::Participant),
            "presenter" => Ok(Role::Presenter),
            other => Err(format!("unknown role `{other}`")),
        }
    }
}

/// A single presentation session: one presenter, one room, one time slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Session {
    pub id: SessionId,
    pub presenter: PersonId,
    pub room: RoomId,
    /// Minutes from conference start.
    pub start: u32,
    pub duration_min: u32,
}

impl Session {
    /// Exclusive end of the session interval, minutes from conference start.
    pub fn end(&self) -> u32 {
        self.start + self.duration_min
    }

    /// Two sessions overlap in time, regardless of room.
    pub fn overlaps(&self, other: &Session) -> bool {
        self.start < other.end() && other.start < self.end()
    }
}

/// Sparse participants x items matrix of tagged ratings.
///
/// A person is a row only while they hold at least one rating; absent cells
/// mean "unrated", not "rated zero".
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatingMatrix {
    cells: BTreeMap<PersonId, BTreeMap<ItemId, u8>>,
}

impl RatingMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, person: PersonId, item: ItemId, rating: u8) {
        self.cells.entry(person).or_default().insert(item, rating);
    }

    pub fn rating(&self, person: &PersonId, item: &ItemId) -> Option<u8> {
        self.cells.get(person).and_then(|row| row.get(item)).copied()
    }

    /// The full row for one person, if they rated anything.
    pub fn ratings_of(&self, person: &PersonId) -> Option<&BTreeMap<ItemId, u8>> {
        self.cells.get(person)
    }

    /// Persons that currently own at least one rating, in id order.
    pub fn persons(&self) -> impl Iterator<Item = &PersonId> {
        self.cells.keys()
    }

    /// (person, item, rating) triples in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&PersonId, &ItemId, u8)> {
        self.cells.iter().flat_map(|(person, row)| {
            row.iter().map(move |(item, rating)| (person, item, *rating))
        })
    }

    /// Items rated by both persons, with both ratings, in item order.
    pub fn co_rated(&self, a: &PersonId, b: &PersonId) -> Vec<(ItemId, u8, u8)> {
        match (self.cells.get(a), self.cells.get(b)) {
            (Some(row_a), Some(row_b)) => row_a
                .iter()
                .filter_map(|(item, &ra)| row_b.get(item).map(|&rb| (item.clone(), ra, rb)))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Total number of present cells.
    pub fn len(&self) -> usize {
        self.cells.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Arithmetic mean of a person's present ratings. Absent cells are excluded,
/// which keeps the mean well-defined under sparsity.
pub fn mean_rating(matrix: &RatingMatrix, person: &PersonId) -> Result<f64, Error> {
    let row = matrix
        .ratings_of(person)
        .filter(|row| !row.is_empty())
        .ok_or_else(|| Error::UndefinedMean(person.to_string()))?;
    let sum: u32 = row.values().map(|&r| u32::from(r)).sum();
    Ok(f64::from(sum) / row.len() as f64)
}

/// One logged contact between a presenter and a participant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contact {
    pub duration_min: u32,
    /// Number of times the pair were in contact within the time frame.
    pub frequency: u32,
}

/// Contact durations and frequencies, keyed by (presenter, participant),
/// together with the conference time frame T they were observed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactLog {
    /// Time frame T in minutes. Mirrors the dataset-level value.
    pub t_total: u32,
    entries: BTreeMap<(PersonId, PersonId), Contact>,
}

impl ContactLog {
    pub fn new(t_total: u32) -> Self {
        Self {
            t_total,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, presenter: PersonId, participant: PersonId, contact: Contact) {
        self.entries.insert((presenter, participant), contact);
    }

    pub fn get(&self, presenter: &PersonId, participant: &PersonId) -> Option<&Contact> {
        self.entries
            .get(&(presenter.clone(), participant.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(PersonId, PersonId), &Contact)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// A direct link exists when the pair have at least one contact of
    /// nonzero duration.
    pub fn has_link(&self, presenter: &PersonId, participant: &PersonId) -> bool {
        self.get(presenter, participant)
            .is_some_and(|c| c.frequency >= 1 && c.duration_min > 0)
    }
}

/// One availability window: a person is in `room` during `[start, end)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Window {
    pub room: RoomId,
    pub start: u32,
    pub end: u32,
}

/// How the presenter-popularity gate threshold is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreePolicy {
    /// Resolve to the median presenter degree of the dataset at hand
    /// (upper median for even counts). Scale-free and deterministic.
    Median,
    /// A fixed degree threshold.
    Fixed(u32),
    /// Popularity gate disabled: no one is admitted via degree centrality.
    Disabled,
}

impl fmt::Display for DegreePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreePolicy::Median => f.write_str("median"),
            DegreePolicy::Fixed(t) => write!(f, "{t}"),
            DegreePolicy::Disabled => f.write_str("off"),
        }
    }
}

impl FromStr for DegreePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "median" => Ok(DegreePolicy::Median),
            "off" => Ok(DegreePolicy::Disabled),
            other => other
                .parse::<u32>()
                .map(DegreePolicy::Fixed)
                .map_err(|_| format!("expected `median`, `off`, or an integer, got `{other}`")),
        }
    }
}

/// Gating and ranking parameters for a recommendation run.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds {
    /// Pearson similarity threshold for the social-context stream.
    pub gamma: f64,
    /// Tie-strength threshold for the social-relations stream.
    pub beta: f64,
    /// Presenter-popularity gate policy.
    pub degree_policy: DegreePolicy,
    /// Cap on how many most-similar presenters are eligible for the context
    /// stream. `None` disables the cap (every presenter is eligible), which
    /// is the default and matches the exhaustive pair loop.
    pub k_neighbors: Option<usize>,
    /// Per-participant, per-stream list length.
    pub top_n: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            gamma: 0.6,
            beta: 0.5,
            degree_policy: DegreePolicy::Median,
            k_neighbors: None,
            top_n: 10,
        }
    }
}

impl Thresholds {
    /// Check every field is inside its legal range before any computation.
    pub fn validate(&self) -> Result<(), Error> {
        if !self.gamma.is_finite() || !(-1.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidConfig(format!(
                "gamma must lie in [-1, 1], got {}",
                self.gamma
            )));
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if self.top_n == 0 {
            return Err(Error::InvalidConfig("top_n must be >= 1".into()));
        }
        if self.k_neighbors == Some(0) {
            return Err(Error::InvalidConfig(
                "k_neighbors must be >= 1 when set".into(),
            ));
        }
        Ok(())
    }
}

/// A full conference dataset: person registry, rating matrix, contact log,
/// session table, availability windows, and optional relevance labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub schema_version: u32,
    /// Conference time frame T in minutes.
    pub t_total: u32,
    pub rooms: BTreeSet<RoomId>,
    pub persons: BTreeMap<PersonId, Role>,
    pub items: BTreeSet<ItemId>,
    pub ratings: RatingMatrix,
    pub contacts: ContactLog,
    pub sessions: BTreeMap<SessionId, Session>,
    pub availability: BTreeMap<PersonId, Vec<Window>>,
    /// Ground-truth relevance labels: (participant, session) pairs.
    pub labels: BTreeSet<(PersonId, SessionId)>,
}

impl Dataset {
    /// An empty dataset with the given time frame, ready to be populated.
    pub fn empty(t_total: u32) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            t_total,
            rooms: BTreeSet::new(),
            persons: BTreeMap::new(),
            items: BTreeSet::new(),
            ratings: RatingMatrix::new(),
            contacts: ContactLog::new(t_total),
            sessions: BTreeMap::new(),
            availability: BTreeMap::new(),
            labels: BTreeSet::new(),
        }
    }

    /// Recommendation targets: persons with role `participant`, in id order.
    pub fn participants(&self) -> impl Iterator<Item = &PersonId> {
        self.persons
            .iter()
            .filter(|(_, role)| **role == Role::Participant)
            .map(|(id, _)| id)
    }

    /// Persons with role `presenter`, in id order.
    pub fn presenters(&self) -> impl Iterator<Item = &PersonId> {
        self.persons
            .iter()
            .filter(|(_, role)| **role == Role::Presenter)
            .map(|(id, _)| id)
    }

    /// Sessions delivered by one presenter, in session-id order.
    pub fn sessions_of(&self, presenter: &PersonId) -> Vec<&Session> {
        self.sessions
            .values()
            .filter(|s| s.presenter == *presenter)
            .collect()
    }

    /// Availability windows of a person; empty slice if none declared.
    pub fn windows_of(&self, person: &PersonId) -> &[Window] {
        self.availability
            .get(person)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// One broken invariant: which rule, and which record broke it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: String,
    pub locus: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.locus)
    }
}

/// Outcome of validating a dataset. Violations are reported, not thrown:
/// an invalid dataset is data, not a programming error.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return f.write_str("pass");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

fn check_id(report: &mut Vec<Violation>, kind: &str, id: &str) {
    if id.is_empty() {
        report.push(Violation {
            rule: "identifier non-empty".into(),
            locus: format!("{kind} with empty id"),
        });
    } else if id.chars().any(char::is_whitespace) {
        report.push(Violation {
            rule: "identifier free of whitespace".into(),
            locus: format!("{kind} `{id}`"),
        });
    }
}

/// Validate every schema invariant of a dataset and report all violations.
pub fn validate_dataset(ds: &Dataset) -> ValidationReport {
    let mut v = Vec::new();

    if ds.schema_version != SCHEMA_VERSION {
        v.push(Violation {
            rule: format!("schema_version = {SCHEMA_VERSION}"),
            locus: format!("meta declares {}", ds.schema_version),
        });
    }
    if ds.t_total == 0 {
        v.push(Violation {
            rule: "T_total > 0".into(),
            locus: "meta".into(),
        });
    }
    if ds.contacts.t_total != ds.t_total {
        v.push(Violation {
            rule: "contact log time frame equals meta T_total".into(),
            locus: format!(
                "contact log declares {}, meta declares {}",
                ds.contacts.t_total, ds.t_total
            ),
        });
    }

    // Room ids must stay distinct after normalization, or matching would
    // silently merge them.
    let mut seen_rooms: BTreeMap<String, &RoomId> = BTreeMap::new();
    for room in &ds.rooms {
        check_id(&mut v, "room", room.as_str());
        if let Some(prev) = seen_rooms.insert(room.normalized(), room) {
            v.push(Violation {
                rule: "rooms distinct after normalization".into(),
                locus: format!("`{prev}` and `{room}`"),
            });
        }
    }

    for (person, _) in &ds.persons {
        check_id(&mut v, "person", person.as_str());
    }
    for item in &ds.items {
        check_id(&mut v, "item", item.as_str());
    }

    for (person, item, rating) in ds.ratings.iter() {
        if !ds.persons.contains_key(person) {
            v.push(Violation {
                rule: "rating person registered".into(),
                locus: format!("rating by `{person}`"),
            });
        }
        if !ds.items.contains(item) {
            v.push(Violation {
                rule: "rating item declared".into(),
                locus: format!("rating of `{item}` by `{person}`"),
            });
        }
        if !(1..=5).contains(&rating) {
            v.push(Violation {
                rule: "rating ∈ [1,5]".into(),
                locus: format!("`{person}` rated `{item}` as {rating}"),
            });
        }
    }
    // Rows present in the matrix must be non-empty. A person missing from
    // the matrix entirely is permitted (their similarity is undefined).
    for person in ds.ratings.persons() {
        if ds.ratings.ratings_of(person).is_some_and(BTreeMap::is_empty) {
            v.push(Violation {
                rule: "at least one rating per row".into(),
                locus: format!("`{person}` has an empty rating row"),
            });
        }
    }

    for ((presenter, participant), contact) in ds.contacts.iter() {
        let locus = format!("contact ({presenter}, {participant})");
        match ds.persons.get(presenter) {
            None => v.push(Violation {
                rule: "contact presenter registered".into(),
                locus: locus.clone(),
            }),
            Some(Role::Participant) => v.push(Violation {
                rule: "contact keyed by a presenter".into(),
                locus: locus.clone(),
            }),
            Some(Role::Presenter) => {}
        }
        if !ds.persons.contains_key(participant) {
            v.push(Violation {
                rule: "contact participant registered".into(),
                locus: locus.clone(),
            });
        }
        if presenter == participant {
            v.push(Violation {
                rule: "contact endpoints distinct".into(),
                locus: locus.clone(),
            });
        }
        if contact.duration_min > ds.t_total {
            v.push(Violation {
                rule: "duration ≤ T_total".into(),
                locus: format!(
                    "{locus} has duration {} with T_total {}",
                    contact.duration_min, ds.t_total
                ),
            });
        }
        if contact.duration_min > 0 && contact.frequency == 0 {
            v.push(Violation {
                rule: "frequency ≥ 1 whenever duration > 0".into(),
                locus,
            });
        }
    }

    for session in ds.sessions.values() {
        let locus = format!("session `{}`", session.id);
        check_id(&mut v, "session", session.id.as_str());
        match ds.persons.get(&session.presenter) {
            None => v.push(Violation {
                rule: "session presenter registered".into(),
                locus: locus.clone(),
            }),
            Some(Role::Participant) => v.push(Violation {
                rule: "session presenter has role presenter".into(),
                locus: locus.clone(),
            }),
            Some(Role::Presenter) => {}
        }
        if !ds.rooms.iter().any(|r| r.matches(&session.room)) {
            v.push(Violation {
                rule: "room ∈ declared room set".into(),
                locus: format!("{locus} in undeclared room `{}`", session.room),
            });
        }
        if session.duration_min == 0 {
            v.push(Violation {
                rule: "session duration > 0".into(),
                locus: locus.clone(),
            });
        }
        if session.end() > ds.t_total {
            v.push(Violation {
                rule: "session within conference bounds".into(),
                locus: format!(
                    "{locus} ends at {} with T_total {}",
                    session.end(),
                    ds.t_total
                ),
            });
        }
    }

    for (person, windows) in &ds.availability {
        if !ds.persons.contains_key(person) {
            v.push(Violation {
                rule: "availability person registered".into(),
                locus: format!("availability of `{person}`"),
            });
        }
        for w in windows {
            let locus = format!("window ({person}, {}, {}, {})", w.room, w.start, w.end);
            if w.start >= w.end {
                v.push(Violation {
                    rule: "window start < end".into(),
                    locus: locus.clone(),
                });
            }
            if w.end > ds.t_total {
                v.push(Violation {
                    rule: "window within [0, T_total]".into(),
                    locus: locus.clone(),
                });
            }
            if !ds.rooms.iter().any(|r| r.matches(&w.room)) {
                v.push(Violation {
                    rule: "window room ∈ declared room set".into(),
                    locus,
                });
            }
        }
    }

    for (person, session) in &ds.labels {
        let locus = format!("label ({person}, {session})");
        match ds.persons.get(person) {
            None => v.push(Violation {
                rule: "label person registered".into(),
                locus: locus.clone(),
            }),
            Some(Role::Presenter) => v.push(Violation {
                rule: "label person has role participant".into(),
                locus: locus.clone(),
            }),
            Some(Role::Participant) => {}
        }
        if !ds.sessions.contains_key(session) {
            v.push(Violation {
                rule: "label session exists".into(),
                locus,
            });
        }
    }

    ValidationReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_dataset() -> Dataset {
        let mut ds = Dataset::empty(720);
        ds.rooms.insert(RoomId::from("RoomA"));
        ds.persons.insert(PersonId::from("pa1"), Role::Participant);
        ds.persons.insert(PersonId::from("pr1"), Role::Presenter);
        ds.items.insert(ItemId::from("i1"));
        ds.items.insert(ItemId::from("i2"));
        ds.items.insert(ItemId::from("i3"));
        for (item, rating) in [("i1", 2), ("i2", 4), ("i3", 5)] {
            ds.ratings
                .insert(PersonId::from("pa1"), ItemId::from(item), rating);
        }
        ds.ratings
            .insert(PersonId::from("pr1"), ItemId::from("i1"), 3);
        ds.contacts.insert(
            PersonId::from("pr1"),
            PersonId::from("pa1"),
            Contact {
                duration_min: 60,
                frequency: 5,
            },
        );
        ds.sessions.insert(
            SessionId::from("s1"),
            Session {
                id: SessionId::from("s1"),
                presenter: PersonId::from("pr1"),
                room: RoomId::from("RoomA"),
                start: 60,
                duration_min: 25,
            },
        );
        ds.availability.insert(
            PersonId::from("pa1"),
            vec![Window {
                room: RoomId::from("RoomA"),
                start: 0,
                end: 720,
            }],
        );
        ds.labels
            .insert((PersonId::from("pa1"), SessionId::from("s1")));
        ds
    }

    #[test]
    fn tiny_dataset_validates() {
        let report = validate_dataset(&tiny_dataset());
        assert!(report.is_pass(), "{report}");
    }

    #[test]
    fn out_of_range_rating_is_reported() {
        let mut ds = tiny_dataset();
        ds.ratings
            .insert(PersonId::from("pa1"), ItemId::from("i1"), 6);
        let report = validate_dataset(&ds);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == "rating ∈ [1,5]"));
    }

    #[test]
    fn duration_beyond_time_frame_is_reported() {
        let mut ds = tiny_dataset();
        ds.contacts.insert(
            PersonId::from("pr1"),
            PersonId::from("pa1"),
            Contact {
                duration_min: 800,
                frequency: 2,
            },
        );
        let report = validate_dataset(&ds);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == "duration ≤ T_total"));
    }

    #[test]
    fn unregistered_references_are_reported() {
        let mut ds = tiny_dataset();
        ds.labels
            .insert((PersonId::from("ghost"), SessionId::from("s1")));
        ds.availability.insert(
            PersonId::from("phantom"),
            vec![Window {
                room: RoomId::from("RoomA"),
                start: 0,
                end: 100,
            }],
        );
        let report = validate_dataset(&ds);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == "label person registered"));
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == "availability person registered"));
    }

    #[test]
    fn normalized_room_collision_is_reported() {
        let mut ds = tiny_dataset();
        ds.rooms.insert(RoomId::from("roomA"));
        let report = validate_dataset(&ds);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == "rooms distinct after normalization"));
    }

    #[test]
    fn mean_rating_examples() {
        let ds = tiny_dataset();
        // Singleton row.
        assert_eq!(
            mean_rating(&ds.ratings, &PersonId::from("pr1")).unwrap(),
            3.0
        );
        // {2,4,5} -> 11/3.
        let m = mean_rating(&ds.ratings, &PersonId::from("pa1")).unwrap();
        assert!((m - 11.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn mean_rating_symmetric_pair() {
        let mut matrix = RatingMatrix::new();
        matrix.insert(PersonId::from("p"), ItemId::from("a"), 1);
        matrix.insert(PersonId::from("p"), ItemId::from("b"), 5);
        assert_eq!(mean_rating(&matrix, &PersonId::from("p")).unwrap(), 3.0);
    }

    #[test]
    fn mean_rating_is_column_permutation_invariant() {
        let mut a = RatingMatrix::new();
        let mut b = RatingMatrix::new();
        // Same multiset of ratings under two item labelings.
        for (item, rating) in [("x", 2), ("y", 3), ("z", 5)] {
            a.insert(PersonId::from("p"), ItemId::from(item), rating);
        }
        for (item, rating) in [("z", 2), ("x", 3), ("y", 5)] {
            b.insert(PersonId::from("p"), ItemId::from(item), rating);
        }
        assert_eq!(
            mean_rating(&a, &PersonId::from("p")).unwrap(),
            mean_rating(&b, &PersonId::from("p")).unwrap()
        );
    }

    #[test]
    fn mean_rating_of_absent_person_is_undefined() {
        let matrix = RatingMatrix::new();
        assert!(matches!(
            mean_rating(&matrix, &PersonId::from("nobody")),
            Err(Error::UndefinedMean(_))
        ));
    }

    #[test]
    fn room_matching_is_normalized() {
        assert!(RoomId::from(" RoomA ").matches(&RoomId::from("rooma")));
        assert!(!RoomId::from("RoomA").matches(&RoomId::from("RoomB")));
    }

    #[test]
    fn thresholds_validate_ranges() {
        assert!(Thresholds::default().validate().is_ok());
        let bad = Thresholds {
            gamma: 1.5,
            ..Thresholds::default()
        };
        assert!(bad.validate().is_err());
        let bad = Thresholds {
            beta: -0.1,
            ..Thresholds::default()
        };
        assert!(bad.validate().is_err());
        let bad = Thresholds {
            top_n: 0,
            ..Thresholds::default()
        };
        assert!(bad.validate().is_err());
    }
}
