//! Canonical line-oriented text format for datasets.
//!
//! A dataset file is a sequence of sections. Each section starts with a
//! `[name]` header and holds one whitespace-separated record per line.
//! Full-line `#` comments and blank lines are ignored on parse. The
//! canonical serializer emits sections in a fixed order with records sorted
//! by their natural keys and no comments, so `serialize(parse(text))` is a
//! fixed point and datasets are diffable.
//!
//! ```text
//! [meta]
//! schema_version 1
//! t_total 720
//! rooms RoomA RoomB
//!
//! [persons]
//! pa001 participant
//! pr001 presenter
//!
//! [items]
//! i01
//!
//! [ratings]
//! pa001 i01 4            # person item rating
//!
//! [contacts]
//! pr001 pa001 60 5       # presenter participant duration_min frequency
//!
//! [sessions]
//! s01 pr001 RoomA 0 25   # session presenter room start duration_min
//!
//! [availability]
//! pa001 RoomA 0 720      # person room start end
//!
//! [labels]
//! pa001 s01              # participant session
//! ```
//!
//! Identifiers are whitespace-free tokens. Out-of-range *values* (say a
//! rating of 6) parse fine and are reported by validation; malformed
//! *records* (wrong arity, non-numeric fields, duplicate keys) are parse
//! errors carrying the line number.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::domain::{
    Contact, Dataset, ItemId, PersonId, Role, RoomId, Session, SessionId, Window, SCHEMA_VERSION,
};
use crate::Error;

const SECTIONS: &[&str] = &[
    "meta",
    "persons",
    "items",
    "ratings",
    "contacts",
    "sessions",
    "availability",
    "labels",
];

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, field: &str, token: &str) -> Result<T, Error> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("{field} must be a non-negative integer, got `{token}`")))
}

/// Parse a dataset from its canonical (or hand-written) text form.
pub fn parse_dataset(text: &str) -> Result<Dataset, Error> {
    let mut section: Option<&str> = None;
    let mut seen: BTreeSet<&str> = BTreeSet::new();

    let mut schema_version: Option<u32> = None;
    let mut t_total: Option<u32> = None;
    let mut rooms: BTreeSet<RoomId> = BTreeSet::new();
    let mut ds = Dataset::empty(0);

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }

        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if !SECTIONS.contains(&name) {
                return Err(parse_err(lineno, format!("unknown section `[{name}]`")));
            }
            if !seen.insert(SECTIONS[SECTIONS.iter().position(|s| *s == name).unwrap()]) {
                return Err(parse_err(lineno, format!("duplicate section `[{name}]`")));
            }
            section = Some(name);
            continue;
        }

        let tokens: Vec<&str> = line.split_whitespace().collect();
        match section {
            None => return Err(parse_err(lineno, "record before any section header")),
            Some("meta") => match tokens.as_slice() {
                ["schema_version", v] => schema_version = Some(parse_num(lineno, "schema_version", v)?),
                ["t_total", v] => t_total = Some(parse_num(lineno, "t_total", v)?),
                ["rooms", names @ ..] if !names.is_empty() => {
                    for name in names {
                        if !rooms.insert(RoomId::from(*name)) {
                            return Err(parse_err(lineno, format!("duplicate room `{name}`")));
                        }
                    }
                }
                _ => return Err(parse_err(lineno, "meta expects `schema_version N`, `t_total N`, or `rooms R...`")),
            },
            Some("persons") => match tokens.as_slice() {
                [id, role] => {
                    let role: Role = role.parse().map_err(|e| parse_err(lineno, e))?;
                    if ds.persons.insert(PersonId::from(*id), role).is_some() {
                        return Err(parse_err(lineno, format!("duplicate person `{id}`")));
                    }
                }
                _ => return Err(parse_err(lineno, "persons expects `id role`")),
            },
            Some("items") => match tokens.as_slice() {
                [id] => {
                    if !ds.items.insert(ItemId::from(*id)) {
                        return Err(parse_err(lineno, format!("duplicate item `{id}`")));
                    }
                }
                _ => return Err(parse_err(lineno, "items expects a single `id`")),
            },
            Some("ratings") => match tokens.as_slice() {
                [person, item, value] => {
                    let person = PersonId::from(*person);
                    let item = ItemId::from(*item);
                    let value: u8 = parse_num(lineno, "rating", value)?;
                    if ds.ratings.rating(&person, &item).is_some() {
                        return Err(parse_err(lineno, format!("duplicate rating ({person}, {item})")));
                    }
                    ds.ratings.insert(person, item, value);
                }
                _ => return Err(parse_err(lineno, "ratings expects `person item rating`")),
            },
            Some("contacts") => match tokens.as_slice() {
                [presenter, participant, duration, frequency] => {
                    let presenter = PersonId::from(*presenter);
                    let participant = PersonId::from(*participant);
                    if ds.contacts.get(&presenter, &participant).is_some() {
                        return Err(parse_err(
                            lineno,
                            format!("duplicate contact ({presenter}, {participant})"),
                        ));
                    }
                    ds.contacts.insert(
                        presenter,
                        participant,
                        Contact {
                            duration_min: parse_num(lineno, "duration_min", duration)?,
                            frequency: parse_num(lineno, "frequency", frequency)?,
                        },
                    );
                }
                _ => return Err(parse_err(
                    lineno,
                    "contacts expects `presenter participant duration_min frequency`",
                )),
            },
            Some("sessions") => match tokens.as_slice() {
                [id, presenter, room, start, duration] => {
                    let id = SessionId::from(*id);
                    if ds.sessions.contains_key(&id) {
                        return Err(parse_err(lineno, format!("duplicate session `{id}`")));
                    }
                    let session = Session {
                        id: id.clone(),
                        presenter: PersonId::from(*presenter),
                        room: RoomId::from(*room),
                        start: parse_num(lineno, "start", start)?,
                        duration_min: parse_num(lineno, "duration_min", duration)?,
                    };
                    ds.sessions.insert(id, session);
                }
                _ => return Err(parse_err(
                    lineno,
                    "sessions expects `session presenter room start duration_min`",
                )),
            },
            Some("availability") => match tokens.as_slice() {
                [person, room, start, end] => {
                    ds.availability
                        .entry(PersonId::from(*person))
                        .or_default()
                        .push(Window {
                            room: RoomId::from(*room),
                            start: parse_num(lineno, "start", start)?,
                            end: parse_num(lineno, "end", end)?,
                        });
                }
                _ => return Err(parse_err(lineno, "availability expects `person room start end`")),
            },
            Some("labels") => match tokens.as_slice() {
                [person, session] => {
                    let pair = (PersonId::from(*person), SessionId::from(*session));
                    if !ds.labels.insert(pair) {
                        return Err(parse_err(lineno, format!("duplicate label `{line}`")));
                    }
                }
                _ => return Err(parse_err(lineno, "labels expects `participant session`")),
            },
            Some(_) => unreachable!("section names are checked at the header"),
        }
    }

    let schema_version =
        schema_version.ok_or_else(|| parse_err(text.lines().count(), "missing `schema_version` in [meta]"))?;
    if schema_version != SCHEMA_VERSION {
        return Err(parse_err(
            1,
            format!("unsupported schema version {schema_version} (this build reads {SCHEMA_VERSION})"),
        ));
    }
    let t_total = t_total.ok_or_else(|| parse_err(text.lines().count(), "missing `t_total` in [meta]"))?;

    ds.schema_version = schema_version;
    ds.t_total = t_total;
    ds.contacts.t_total = t_total;
    ds.rooms = rooms;
    // Canonical window order inside each person's list.
    for windows in ds.availability.values_mut() {
        windows.sort();
    }
    Ok(ds)
}

/// Serialize a dataset to its canonical text form. The output is a fixed
/// point of `parse_dataset` followed by `serialize_dataset`.
pub fn serialize_dataset(ds: &Dataset) -> String {
    let mut out = String::new();

    out.push_str("[meta]\n");
    let _ = writeln!(out, "schema_version {}", ds.schema_version);
    let _ = writeln!(out, "t_total {}", ds.t_total);
    if !ds.rooms.is_empty() {
        let rooms: Vec<&str> = ds.rooms.iter().map(RoomId::as_str).collect();
        let _ = writeln!(out, "rooms {}", rooms.join(" "));
    }

    out.push_str("\n[persons]\n");
    for (person, role) in &ds.persons {
        let _ = writeln!(out, "{person} {}", role.as_str());
    }

    out.push_str("\n[items]\n");
    for item in &ds.items {
        let _ = writeln!(out, "{item}");
    }

    out.push_str("\n[ratings]\n");
    for (person, item, rating) in ds.ratings.iter() {
        let _ = writeln!(out, "{person} {item} {rating}");
    }

    out.push_str("\n[contacts]\n");
    for ((presenter, participant), contact) in ds.contacts.iter() {
        let _ = writeln!(
            out,
            "{presenter} {participant} {} {}",
            contact.duration_min, contact.frequency
        );
    }

    out.push_str("\n[sessions]\n");
    for session in ds.sessions.values() {
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            session.id, session.presenter, session.room, session.start, session.duration_min
        );
    }

    out.push_str("\n[availability]\n");
    for (person, windows) in &ds.availability {
        let mut sorted = windows.clone();
        sorted.sort();
        for w in sorted {
            let _ = writeln!(out, "{person} {} {} {}", w.room, w.start, w.end);
        }
    }

    out.push_str("\n[labels]\n");
    for (person, session) in &ds.labels {
        let _ = writeln!(out, "{person} {session}");
    }

    out
}
