//! Contextual post-filtering: does a participant's declared availability
//! match a session's room and time slot? Plus the typed relation edges used
//! to explain a recommendation.

use std::fmt;

use crate::domain::{Dataset, ItemId, PersonId, Session, SessionId, Window};

/// Outcome of matching one participant against one session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub participant: PersonId,
    pub session: SessionId,
    /// Some availability window names the session's room.
    pub location_ok: bool,
    /// Some window in that room fully contains the session interval.
    pub time_ok: bool,
    pub matched: bool,
}

/// Decide whether a participant can attend a session.
///
/// Location and time equality are read as membership and interval
/// containment: a participant declares availability windows, and a session
/// matches when one window in the session's room covers
/// `[start, start + duration)` entirely.
pub fn match_context(participant: &PersonId, windows: &[Window], session: &Session) -> MatchResult {
    let location_ok = windows.iter().any(|w| w.room.matches(&session.room));
    let time_ok = windows.iter().any(|w| {
        w.room.matches(&session.room) && w.start <= session.start && session.end() <= w.end
    });
    MatchResult {
        participant: participant.clone(),
        session: session.id.clone(),
        location_ok,
        time_ok,
        matched: location_ok && time_ok,
    }
}

/// One typed edge of the relation graph between a presenter, a participant,
/// and a session. The edges explain which evidence connected the pair; the
/// admission gates live in the recommendation loop.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelationEdge {
    /// A1: a direct user-user contact link.
    SocialNetwork { presenter: PersonId, participant: PersonId },
    /// A2: the presenter's location/time annotation on the session.
    Comment { presenter: PersonId, session: SessionId, room: String, start: u32 },
    /// A3: the session's content: one of its presenter's keyword items.
    ItemContent { session: SessionId, item: ItemId },
    /// A4: a tag post: the participant rated a keyword the presenter also
    /// rated, tying them to the session through shared vocabulary.
    TagPost { participant: PersonId, item: ItemId, session: SessionId },
}

impl RelationEdge {
    pub fn kind(&self) -> &'static str {
        match self {
            RelationEdge::SocialNetwork { .. } => "A1",
            RelationEdge::Comment { .. } => "A2",
            RelationEdge::ItemContent { .. } => "A3",
            RelationEdge::TagPost { .. } => "A4",
        }
    }
}

impl fmt::Display for RelationEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationEdge::SocialNetwork { presenter, participant } => {
                write!(f, "A1 social-network {presenter} {participant}")
            }
            RelationEdge::Comment { presenter, session, room, start } => {
                write!(f, "A2 comment {presenter} {session} {room}@{start}")
            }
            RelationEdge::ItemContent { session, item } => {
                write!(f, "A3 item-content {session} {item}")
            }
            RelationEdge::TagPost { participant, item, session } => {
                write!(f, "A4 tag-post {participant} {item} {session}")
            }
        }
    }
}

/// Materialize the relation edges connecting presenter `p`, participant `x`,
/// and one of `p`'s sessions. Output order is deterministic: A1, A2, A3
/// (by item), A4 (by item).
pub fn relation_edges(
    ds: &Dataset,
    p: &PersonId,
    x: &PersonId,
    session: &Session,
) -> Vec<RelationEdge> {
    let mut edges = Vec::new();

    if ds.contacts.has_link(p, x) {
        edges.push(RelationEdge::SocialNetwork {
            presenter: p.clone(),
            participant: x.clone(),
        });
    }

    edges.push(RelationEdge::Comment {
        presenter: p.clone(),
        session: session.id.clone(),
        room: session.room.as_str().to_owned(),
        start: session.start,
    });

    if let Some(row) = ds.ratings.ratings_of(p) {
        for item in row.keys() {
            edges.push(RelationEdge::ItemContent {
                session: session.id.clone(),
                item: item.clone(),
            });
        }
    }

    for (item, _, _) in ds.ratings.co_rated(p, x) {
        edges.push(RelationEdge::TagPost {
            participant: x.clone(),
            item,
            session: session.id.clone(),
        });
    }

    edges
}
