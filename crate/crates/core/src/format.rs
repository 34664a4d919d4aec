//! Text formats.
//!
//! Triplets are written `A ; B | C` with comma-separated variable names; the
//! `| C` part is omitted when `C` is empty.
//!
//! A dependency model file (`.cim`) holds one triplet per line. An optional
//! `vars: a,b,c` header fixes the universe; without it the universe is the
//! variables in order of first appearance. `#` starts a comment.
//!
//! A measure file (`.cmw`) starts with `vars: a:2 b:2 c:3` (name and
//! cardinality, universe order), followed by one line per nonzero cell:
//! the state indices, then the integer weight.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::model::DependencyModel;
use crate::triplet::{make_triplet, Triplet};
use crate::universe::{is_valid_name, Universe};

/// The three name lists of a triplet, before resolution against a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripletNames {
    pub first: Vec<String>,
    pub second: Vec<String>,
    pub cond: Vec<String>,
}

impl TripletNames {
    pub fn all(&self) -> impl Iterator<Item = &str> {
        self.first
            .iter()
            .chain(&self.second)
            .chain(&self.cond)
            .map(String::as_str)
    }

    pub fn resolve(&self, universe: &Universe) -> std::result::Result<Triplet, String> {
        let set = |names: &[String]| {
            universe
                .set_from_names(names.iter().map(String::as_str))
                .map_err(|e| e.to_string())
        };
        let total = self.first.len() + self.second.len() + self.cond.len();
        let (a, b, c) = (set(&self.first)?, set(&self.second)?, set(&self.cond)?);
        if a.len() + b.len() + c.len() != total {
            return Err("variable repeated within a triplet".into());
        }
        make_triplet(a, b, c).map_err(|e| e.to_string())
    }
}

fn name_list(part: &str, allow_empty: bool) -> std::result::Result<Vec<String>, String> {
    let part = part.trim();
    if part.is_empty() {
        return if allow_empty {
            Ok(Vec::new())
        } else {
            Err("empty component".into())
        };
    }
    part.split(',')
        .map(|name| {
            let name = name.trim();
            if name.is_empty() {
                Err(format!("empty variable name in {part:?}"))
            } else if !is_valid_name(name) {
                Err(format!("invalid variable name {name:?}"))
            } else {
                Ok(name.to_string())
            }
        })
        .collect()
}

/// Syntax-level parse of `A ; B | C`.
pub fn parse_triplet_names(text: &str) -> std::result::Result<TripletNames, String> {
    let (pair, cond) = match text.split_once('|') {
        Some((pair, cond)) => {
            if cond.contains('|') {
                return Err("more than one '|'".into());
            }
            (pair, cond)
        }
        None => (text, ""),
    };
    let mut parts = pair.split(';');
    let (Some(first), Some(second), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("expected exactly one ';' in {:?}", text.trim()));
    };
    Ok(TripletNames {
        first: name_list(first, false)?,
        second: name_list(second, false)?,
        cond: name_list(cond, true)?,
    })
}

/// Parses one triplet over a known universe.
pub fn parse_triplet(universe: &Universe, text: &str) -> Result<Triplet> {
    parse_triplet_names(text)
        .and_then(|names| names.resolve(universe))
        .map_err(|m| Error::parse(1, m))
}

pub fn format_triplet(universe: &Universe, t: &Triplet) -> String {
    t.display(universe).to_string()
}

/// Contents of a `.cim` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedModel {
    /// `None` only for a header-less file without triplets.
    pub universe: Option<Universe>,
    /// Whether the universe came from a `vars:` header.
    pub declared: bool,
    pub triplets: Vec<Triplet>,
}

impl ParsedModel {
    /// The model, over `fallback` when the file fixed no universe.
    pub fn into_model(self, fallback: impl FnOnce() -> Universe) -> Result<DependencyModel> {
        let universe = self.universe.unwrap_or_else(fallback);
        DependencyModel::from_triplets(universe, self.triplets)
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(keep, _)| keep).trim()
}

pub fn parse_model(text: &str) -> Result<ParsedModel> {
    let mut universe: Option<Universe> = None;
    let mut seen_triplet = false;
    let mut pending: Vec<(usize, TripletNames)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars:") {
            if universe.is_some() || seen_triplet {
                return Err(Error::parse(
                    line_no,
                    "header must come first and only once",
                ));
            }
            let names = name_list(rest, false).map_err(|m| Error::parse(line_no, m))?;
            universe =
                Some(Universe::new(names).map_err(|e| Error::parse(line_no, e.to_string()))?);
            continue;
        }
        seen_triplet = true;
        let names = parse_triplet_names(line).map_err(|m| Error::parse(line_no, m))?;
        pending.push((line_no, names));
    }
    let declared = universe.is_some();
    if universe.is_none() && !pending.is_empty() {
        let mut order: Vec<&str> = Vec::new();
        for (_, names) in &pending {
            for name in names.all() {
                if !order.contains(&name) {
                    order.push(name);
                }
            }
        }
        universe =
            Some(Universe::new(order).map_err(|e| Error::parse(pending[0].0, e.to_string()))?);
    }
    let mut triplets = Vec::with_capacity(pending.len());
    if let Some(u) = &universe {
        for (line_no, names) in &pending {
            triplets.push(names.resolve(u).map_err(|m| Error::parse(*line_no, m))?);
        }
    }
    Ok(ParsedModel {
        universe,
        declared,
        triplets,
    })
}

/// One triplet per line in canonical order, no header.
pub fn format_listing<'a, I>(universe: &Universe, triplets: I) -> String
where
    I: IntoIterator<Item = &'a Triplet>,
{
    let mut out = String::new();
    for t in triplets {
        let _ = writeln!(out, "{}", t.display(universe));
    }
    out
}

/// A complete `.cim` file including the `vars:` header.
pub fn format_model(model: &DependencyModel) -> String {
    let u = model.universe();
    format!(
        "vars: {}\n{}",
        u.names().join(","),
        format_listing(u, model)
    )
}

pub fn parse_measure(text: &str) -> Result<DiscreteMeasure> {
    let mut header: Option<(Universe, Vec<u32>)> = None;
    let mut cells: Vec<(Vec<u32>, u64)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars:") {
            if header.is_some() || !cells.is_empty() {
                return Err(Error::parse(
                    line_no,
                    "header must come first and only once",
                ));
            }
            let mut names = Vec::new();
            let mut cards = Vec::new();
            for item in rest.split_whitespace() {
                let (name, card) = item.split_once(':').ok_or_else(|| {
                    Error::parse(line_no, format!("expected name:card, got {item:?}"))
                })?;
                let card: u32 = card
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad cardinality {card:?}")))?;
                if card == 0 {
                    return Err(Error::parse(
                        line_no,
                        format!("variable {name:?} has no states"),
                    ));
                }
                names.push(name.to_string());
                cards.push(card);
            }
            let u = Universe::new(names).map_err(|e| Error::parse(line_no, e.to_string()))?;
            header = Some((u, cards));
            continue;
        }
        let Some((_, cards)) = &header else {
            return Err(Error::parse(line_no, "missing vars: header"));
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != cards.len() + 1 {
            return Err(Error::parse(
                line_no,
                format!("expected {} state indices and a weight", cards.len()),
            ));
        }
        let state = fields[..cards.len()]
            .iter()
            .zip(cards)
            .map(|(f, &card)| match f.parse::<u32>() {
                Ok(x) if x < card => Ok(x),
                _ => Err(Error::parse(line_no, format!("bad state index {f:?}"))),
            })
            .collect::<Result<Vec<u32>>>()?;
        let weight: u64 = fields[cards.len()]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad weight {:?}", fields[cards.len()])))?;
        if !seen.insert(state.clone()) {
            return Err(Error::parse(line_no, "duplicate cell"));
        }
        cells.push((state, weight));
    }
    let (universe, cards) = header.ok_or_else(|| Error::parse(1, "missing vars: header"))?;
    let last_line = text.lines().count().max(1);
    DiscreteMeasure::new(universe, cards, cells).map_err(|e| match e {
        Error::WeightOverflow { .. } => e,
        other => Error::parse(last_line, other.to_string()),
    })
}

pub fn format_measure(p: &DiscreteMeasure) -> String {
    let u = p.universe();
    let header: Vec<String> = u
        .names()
        .iter()
        .zip(p.cards())
        .map(|(n, c)| format!("{n}:{c}"))
        .collect();
    let mut out = format!("vars: {}\n", header.join(" "));
    for (state, w) in p.cells() {
        for x in state {
            let _ = write!(out, "{x} ");
        }
        let _ = writeln!(out, "{w}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varset::VarSet;

    #[test]
    fn triplet_syntax() {
        let u = Universe::numbered(5).unwrap();
        let t = parse_triplet(&u, " 1,2 ; 3 | 4,5 ").unwrap();
        assert_eq!(t.first(), VarSet::from_indices([0, 1]));
        assert_eq!(t.second(), VarSet::from_indices([2]));
        assert_eq!(t.cond(), VarSet::from_indices([3, 4]));
        assert_eq!(format_triplet(&u, &t), "1,2 ; 3 | 4,5");
        let t = parse_triplet(&u, "2;1").unwrap();
        assert_eq!(format_triplet(&u, &t), "1 ; 2");
        assert_eq!(parse_triplet(&u, "2;1|").unwrap(), t);
    }

    #[test]
    fn triplet_syntax_errors() {
        let u = Universe::numbered(5).unwrap();
        for bad in [
            "1;;2", "1", "1;2|3|4", ";2", "1,;2", "1;2|1", "1;9", "1,1;2",
        ] {
            assert!(parse_triplet(&u, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn model_file_with_header() {
        let text = "# example\nvars: a,b,c,d\n\na;b|c   # first\na ; c | d\n";
        let parsed = parse_model(text).unwrap();
        assert!(parsed.declared);
        let m = parsed.into_model(|| unreachable!()).unwrap();
        assert_eq!(m.universe().names(), ["a", "b", "c", "d"]);
        assert_eq!(m.len(), 2);
        assert_eq!(
            parse_model(&format_model(&m))
                .unwrap()
                .into_model(|| unreachable!())
                .unwrap(),
            m
        );
    }

    #[test]
    fn model_file_infers_universe() {
        let parsed = parse_model("1;2|3\n1;3\n").unwrap();
        assert!(!parsed.declared);
        assert_eq!(parsed.universe.as_ref().unwrap().names(), ["1", "2", "3"]);
        let empty = parse_model("# nothing\n\n").unwrap();
        assert!(empty.universe.is_none() && empty.triplets.is_empty());
    }

    #[test]
    fn model_errors_carry_line_numbers() {
        let err = parse_model("vars: 1,2\n1;2\n1;;2\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "expected exactly one ';' in \"1;;2\"".into()
            }
        );
        assert!(matches!(
            parse_model("1;2\nvars: 1,2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_model("vars: a,b\na;c\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn measure_file() {
        let text = "vars: a:2 b:2 c:2\n0 0 0 1\n0 1 1 1\n1 0 1 1\n1 1 0 1\n";
        let p = parse_measure(text).unwrap();
        assert_eq!(p.total(), 4);
        assert_eq!(p.weight(&[1, 0, 1]), 1);
        assert_eq!(format_measure(&p), text);
    }

    #[test]
    fn measure_file_errors() {
        let dup = "vars: a:2\n0 1\n0 2\n";
        assert!(matches!(
            parse_measure(dup),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_measure("0 1\n").is_err());
        assert!(parse_measure("vars: a:2\n2 1\n").is_err());
        assert!(parse_measure("vars: a:2\n0\n").is_err());
        assert!(parse_measure("vars: a:2\n0 0\n").is_err());
        assert!(parse_measure("vars: a:0\n").is_err());
    }
}
