//! Ruling out local knots by Jones polynomial divisibility.
//!
//! If a knot `K` is a local knot of a link `L`, then `V_K` divides `V_L` in
//! `Z[t^(1/2), t^(-1/2)]`. The converse fails, so a divisible pair is only
//! ever reported as inconclusive.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{conway, jones};
use crate::laurent::{ConwayPoly, HalfLaurent};
use crate::pdcode::{ArcId, Diagram, RawDiagram};

const BUILTIN_TABLE: &str = include_str!("../data/knot_table.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `V_knot` does not divide `V_link`: the knot is not a local knot.
    Excluded,
    /// Divisibility holds; nothing follows.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Excluded => "excluded",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

pub fn exclude_local_knot(v_link: &HalfLaurent, v_knot: &HalfLaurent) -> Result<Verdict> {
    if v_knot.is_zero() {
        return Err(Error::domain("the knot polynomial is zero"));
    }
    Ok(match v_link.divide_exact(v_knot)? {
        Some(_) => Verdict::Inconclusive,
        None => Verdict::Excluded,
    })
}

/// A candidate local knot with its invariants pinned.
#[derive(Clone, Debug)]
pub struct KnotTableEntry {
    pub name: String,
    pub diagram: Diagram,
    pub jones: HalfLaurent,
    pub conway: ConwayPoly,
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    crossings: Vec<[ArcId; 4]>,
    #[serde(default)]
    free_loops: Option<usize>,
    jones: String,
    conway: String,
}

impl KnotTableEntry {
    /// Checks the pinned polynomials against the diagram.
    fn load(raw: RawEntry) -> Result<Self> {
        let diagram = RawDiagram { crossings: raw.crossings, free_loops: raw.free_loops, name: Some(raw.name.clone()) }
            .validate()?;
        if diagram.component_count() != 1 {
            return Err(Error::validation(format!("table entry {} is not a knot", raw.name)));
        }
        let pinned_jones = HalfLaurent::from_str(&raw.jones)?;
        let pinned_conway = ConwayPoly::from_str(&raw.conway)?;
        let computed = jones(&diagram)?;
        if computed != pinned_jones {
            return Err(Error::Invariant(format!(
                "table entry {}: pinned Jones {pinned_jones} but the diagram gives {computed}",
                raw.name
            )));
        }
        let computed = conway(&diagram)?;
        if computed != pinned_conway {
            return Err(Error::Invariant(format!(
                "table entry {}: pinned Conway {pinned_conway} but the diagram gives {computed}",
                raw.name
            )));
        }
        Ok(KnotTableEntry { name: raw.name, diagram, jones: pinned_jones, conway: pinned_conway })
    }
}

/// Parses and verifies a table in the JSON data-file format.
pub fn load_table(json: &str) -> Result<Vec<KnotTableEntry>> {
    let raw: Vec<RawEntry> = serde_json::from_str(json)?;
    raw.into_iter().map(KnotTableEntry::load).collect()
}

/// The shipped table: trefoil (the chirality with `V = t + t^3 - t^4`) and
/// figure-eight.
pub fn builtin_table() -> Result<Vec<KnotTableEntry>> {
    load_table(BUILTIN_TABLE)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub name: String,
    /// True for the mirror image of the tabulated knot.
    pub mirror: bool,
    pub verdict: Verdict,
}

/// Tests every entry and its mirror image.
pub fn scan_table(v_link: &HalfLaurent, table: &[KnotTableEntry]) -> Result<Vec<ScanResult>> {
    if table.is_empty() {
        return Err(Error::domain("empty knot table"));
    }
    let mut out = Vec::with_capacity(2 * table.len());
    for e in table {
        for mirror in [false, true] {
            let v = if mirror { e.jones.substitute_inverse() } else { e.jones.clone() };
            out.push(ScanResult { name: e.name.clone(), mirror, verdict: exclude_local_knot(v_link, &v)? });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hl(s: &str) -> HalfLaurent {
        s.parse().unwrap()
    }

    #[test]
    fn builtin_table_loads() {
        let t = builtin_table().unwrap();
        let names: Vec<&str> = t.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["trefoil", "figure-eight"]);
    }

    #[test]
    fn wrong_pin_fails_loudly() {
        let bad = BUILTIN_TABLE.replace("t + t^3 - t^4", "t^-1 + t^-3 - t^-4");
        assert!(matches!(load_table(&bad), Err(Error::Invariant(_))));
        let bad = BUILTIN_TABLE.replace("\"z^2 + 1\"", "\"z^2 - 1\"");
        assert!(matches!(load_table(&bad), Err(Error::Invariant(_))));
    }

    #[test]
    fn unit_divides_everything() {
        assert_eq!(exclude_local_knot(&hl("t^-7/2 - t^1/2"), &HalfLaurent::one()).unwrap(), Verdict::Inconclusive);
        assert_eq!(exclude_local_knot(&hl("-t^3/2"), &hl("1")).unwrap(), Verdict::Inconclusive);
    }

    #[test]
    fn zero_knot_polynomial_rejected() {
        assert!(matches!(exclude_local_knot(&hl("1"), &HalfLaurent::zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn scan_reports_both_chiralities() {
        let t = builtin_table().unwrap();
        let r = scan_table(&hl("1"), &t).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|s| s.verdict == Verdict::Excluded));
        assert!(scan_table(&hl("1"), &[]).is_err());
    }
}
