//! Oriented link diagrams as PD codes.
//!
//! Each crossing lists its four incident arcs counterclockwise, starting from
//! the incoming under-strand:
//!
//! ```text
//!            c (under, outgoing)
//!            |
//!   d ------ | ------ b        over-strand runs d -> b (positive)
//!            |                              or b -> d (negative)
//!            a (under, incoming)
//! ```
//!
//! A bare PD code does not say which way the over-strand runs. The parser
//! recovers it from the under-strand slots of the same component; components
//! that never pass under anything fall back to label order (the arc after the
//! smallest label is the next larger label). Once parsed, the direction is
//! stored explicitly so every derived diagram stays unambiguous.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ArcId = u32;

/// A crossing in canonical form: `slots[0]` is the incoming under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub slots: [ArcId; 4],
    pub positive: bool,
}

impl Crossing {
    pub fn new(slots: [ArcId; 4], positive: bool) -> Self {
        Crossing { slots, positive }
    }

    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    /// Slot where the over-strand enters.
    pub fn over_in(&self) -> usize {
        if self.positive {
            3
        } else {
            1
        }
    }

    pub fn over_out(&self) -> usize {
        if self.positive {
            1
        } else {
            3
        }
    }

    /// True if the arc in `slot` ends at this crossing.
    pub fn is_incoming(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in()
    }

    pub(crate) fn geometry(&self) -> Geo {
        Geo {
            ccw: self.slots,
            under_in: 0,
            over_in: self.over_in(),
        }
    }
}

/// A crossing described geometrically: arcs in counterclockwise order plus
/// the slots where the under- and over-strands enter.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Geo {
    pub ccw: [ArcId; 4],
    pub under_in: usize,
    pub over_in: usize,
}

impl Geo {
    pub fn canonical(self) -> Crossing {
        let r = self.under_in;
        debug_assert!((self.over_in + 4 - r) % 2 == 1, "strands must alternate around a crossing");
        let slots = [0, 1, 2, 3].map(|i| self.ccw[(i + r) % 4]);
        Crossing {
            slots,
            positive: (self.over_in + 4 - r) % 4 == 3,
        }
    }

    /// Swaps which strand is on top.
    pub fn mirrored(self) -> Geo {
        Geo {
            ccw: self.ccw,
            under_in: self.over_in,
            over_in: self.under_in,
        }
    }

    /// Reflects the plane, reversing the cyclic order of the slots.
    pub fn reflected(self) -> Geo {
        let map = |i: usize| (4 - i) % 4;
        Geo {
            ccw: [0, 1, 2, 3].map(|i| self.ccw[map(i)]),
            under_in: map(self.under_in),
            over_in: map(self.over_in),
        }
    }

    pub fn reverse_under(mut self) -> Geo {
        self.under_in = (self.under_in + 2) % 4;
        self
    }

    pub fn reverse_over(mut self) -> Geo {
        self.over_in = (self.over_in + 2) % 4;
        self
    }
}

/// Where an arc starts and ends: `(crossing index, slot)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcEnds {
    pub tail: (usize, usize),
    pub head: (usize, usize),
    pub component: usize,
}

/// An oriented link diagram.
#[derive(Clone, Debug)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    name: Option<String>,
    components: Vec<Vec<ArcId>>,
    arcs: HashMap<ArcId, ArcEnds>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.crossings == other.crossings && self.free_loops == other.free_loops
    }
}

impl Eq for Diagram {}

impl Diagram {
    /// Builds a diagram from oriented crossings, checking that every arc has
    /// exactly one head and one tail.
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Diagram> {
        let mut heads: HashMap<ArcId, (usize, usize)> = HashMap::new();
        let mut tails: HashMap<ArcId, (usize, usize)> = HashMap::new();
        let mut uses: BTreeMap<ArcId, usize> = BTreeMap::new();
        for (x, c) in crossings.iter().enumerate() {
            for (s, &a) in c.slots.iter().enumerate() {
                *uses.entry(a).or_default() += 1;
                let slot_map = if c.is_incoming(s) { &mut heads } else { &mut tails };
                if slot_map.insert(a, (x, s)).is_some() {
                    return Err(Error::validation(format!(
                        "inconsistent orientation: arc {a} has two {}",
                        if c.is_incoming(s) { "heads" } else { "tails" }
                    )));
                }
            }
        }
        if let Some((a, n)) = uses.iter().find(|(_, &n)| n != 2) {
            return Err(Error::validation(format!("arc multiplicity: arc {a} used {n} times")));
        }

        let mut arcs: HashMap<ArcId, ArcEnds> = HashMap::new();
        let mut components = Vec::new();
        for &start in uses.keys() {
            if arcs.contains_key(&start) {
                continue;
            }
            let comp = components.len();
            let mut cycle = Vec::new();
            let mut a = start;
            loop {
                let head = heads[&a];
                arcs.insert(a, ArcEnds { tail: tails[&a], head, component: comp });
                cycle.push(a);
                let next = crossings[head.0].slots[(head.1 + 2) % 4];
                if next == start {
                    break;
                }
                if arcs.contains_key(&next) {
                    return Err(Error::validation("inconsistent orientation: arcs do not close into cycles"));
                }
                a = next;
            }
            components.push(cycle);
        }
        let d = Diagram { crossings, free_loops, name: None, components, arcs };
        d.check_planar()?;
        Ok(d)
    }

    /// Euler check: every connected piece with `c` crossings bounds `c + 2`
    /// faces exactly when the PD code comes from a planar diagram.
    fn check_planar(&self) -> Result<()> {
        let n = self.crossings.len();
        let mut uf = UnionFind::new(n);
        for e in self.arcs.values() {
            uf.union(e.tail.0, e.head.0);
        }
        let pieces = (0..n).filter(|&x| uf.find(x) == x).count();
        let faces = self.face_map().1;
        if faces != n + 2 * pieces {
            return Err(Error::validation(format!(
                "diagram is not planar: {n} crossings in {pieces} piece(s) but {faces} faces"
            )));
        }
        Ok(())
    }

    /// Index of the face to the left of each half-edge `(crossing, slot)`
    /// when leaving the crossing along that slot's arc, plus the face count.
    pub(crate) fn face_map(&self) -> (HashMap<(usize, usize), usize>, usize) {
        let mut face_of = HashMap::new();
        let mut count = 0;
        for x in 0..self.crossings.len() {
            for s in 0..4 {
                if face_of.contains_key(&(x, s)) {
                    continue;
                }
                let mut he = (x, s);
                while !face_of.contains_key(&he) {
                    face_of.insert(he, count);
                    let e = self.arcs[&self.crossings[he.0].slots[he.1]];
                    let arrive = if e.tail == he { e.head } else { e.tail };
                    he = (arrive.0, (arrive.1 + 3) % 4);
                }
                count += 1;
            }
        }
        (face_of, count)
    }

    pub fn unknot() -> Diagram {
        Diagram::unlink(1)
    }

    pub fn unlink(m: usize) -> Diagram {
        Diagram::new(Vec::new(), m).expect("crossing-free diagram is valid")
    }

    pub fn empty() -> Diagram {
        Diagram::unlink(0)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty() && self.free_loops == 0
    }

    /// Total number of components, crossing-free loops included. Components
    /// that meet crossings come first, ordered by smallest arc id.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.free_loops
    }

    /// Arcs of component `i` in traversal order (empty for a free loop).
    pub fn component_arcs(&self, i: usize) -> &[ArcId] {
        self.components.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_free_loop(&self, i: usize) -> bool {
        i >= self.components.len() && i < self.component_count()
    }

    pub fn arc(&self, a: ArcId) -> Option<ArcEnds> {
        self.arcs.get(&a).copied()
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.components.iter().flatten().copied()
    }

    pub fn max_arc(&self) -> ArcId {
        self.arcs.keys().copied().max().unwrap_or(0)
    }

    pub fn component_of(&self, a: ArcId) -> Option<usize> {
        self.arcs.get(&a).map(|e| e.component)
    }

    /// Components of the under- and over-strands at crossing `x`.
    pub fn strand_components(&self, x: usize) -> (usize, usize) {
        let c = &self.crossings[x];
        (self.arcs[&c.slots[0]].component, self.arcs[&c.slots[c.over_in()]].component)
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(Crossing::sign).sum()
    }

    /// Linking numbers between components; the diagonal is zero.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let m = self.component_count();
        let mut twice = vec![vec![0i64; m]; m];
        for (x, c) in self.crossings.iter().enumerate() {
            let (u, o) = self.strand_components(x);
            if u != o {
                twice[u][o] += c.sign();
                twice[o][u] += c.sign();
            }
        }
        twice
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        assert!(v % 2 == 0, "odd signed crossing count between two components");
                        v / 2
                    })
                    .collect()
            })
            .collect()
    }

    /// Swaps over and under at every crossing.
    pub fn mirror(&self) -> Diagram {
        let crossings = self.crossings.iter().map(|c| c.geometry().mirrored().canonical()).collect();
        let mut d = Diagram::new(crossings, self.free_loops).expect("mirror preserves validity");
        d.name = self.name.as_ref().map(|n| format!("mirror of {n}"));
        d
    }

    /// Reverses the orientation of component `i`.
    pub fn reverse_component(&self, i: usize) -> Result<Diagram> {
        if i >= self.component_count() {
            return Err(Error::domain(format!(
                "component index {i} out of range (diagram has {} components)",
                self.component_count()
            )));
        }
        self.reverse_components(|c| c == i)
    }

    pub fn reverse_all(&self) -> Diagram {
        self.reverse_components(|_| true).expect("reversal preserves validity")
    }

    pub(crate) fn reverse_components(&self, pick: impl Fn(usize) -> bool) -> Result<Diagram> {
        let crossings = (0..self.crossings.len())
            .map(|x| {
                let (u, o) = self.strand_components(x);
                let mut g = self.crossings[x].geometry();
                if pick(u) {
                    g = g.reverse_under();
                }
                if pick(o) {
                    g = g.reverse_over();
                }
                g.canonical()
            })
            .collect();
        let mut d = Diagram::new(crossings, self.free_loops)?;
        d.name = self.name.clone();
        Ok(d)
    }

    /// Places `other` beside `self`; its arcs are relabeled past ours.
    pub fn disjoint_union(&self, other: &Diagram) -> Diagram {
        let off = self.max_arc();
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| Crossing::new(c.slots.map(|a| a + off), c.positive)));
        Diagram::new(crossings, self.free_loops + other.free_loops).expect("union of valid diagrams")
    }

    /// The diagram of the chosen components alone: crossings with the other
    /// components are erased. Components keep their relative order.
    pub fn sublink(&self, keep: &[usize]) -> Result<Diagram> {
        if let Some(&c) = keep.iter().find(|&&c| c >= self.component_count()) {
            return Err(Error::domain(format!(
                "component index {c} out of range (diagram has {} components)",
                self.component_count()
            )));
        }
        let kept = |c: usize| keep.contains(&c);
        let n_cross = self.components.len();
        let free_loops = keep.iter().filter(|&&c| c >= n_cross).count();
        let mut index: HashMap<ArcId, usize> = HashMap::new();
        for (c, cycle) in self.components.iter().enumerate() {
            if kept(c) {
                for &a in cycle {
                    let n = index.len();
                    index.insert(a, n);
                }
            }
        }
        let mut uf = UnionFind::new(index.len());
        let mut crossings = Vec::new();
        for (x, cr) in self.crossings.iter().enumerate() {
            let (u, o) = self.strand_components(x);
            match (kept(u), kept(o)) {
                (true, true) => crossings.push(*cr),
                (true, false) => {
                    uf.union(index[&cr.slots[0]], index[&cr.slots[2]]);
                }
                (false, true) => {
                    uf.union(index[&cr.slots[1]], index[&cr.slots[3]]);
                }
                (false, false) => {}
            }
        }
        // one representative label per merged arc
        let mut rep: HashMap<usize, ArcId> = HashMap::new();
        for (&a, &i) in &index {
            let r = uf.find(i);
            let e = rep.entry(r).or_insert(a);
            *e = (*e).min(a);
        }
        let mut loops = free_loops;
        for (c, cycle) in self.components.iter().enumerate() {
            if kept(c) {
                let r: HashSet<usize> = cycle.iter().map(|a| uf.find(index[a])).collect();
                if r.len() == 1 && !crossings.iter().any(|k: &Crossing| k.slots.contains(&rep[&uf.find(index[&cycle[0]])])) {
                    loops += 1;
                }
            }
        }
        let crossings = crossings
            .into_iter()
            .map(|k| Crossing::new(k.slots.map(|a| rep[&uf.find(index[&a])]), k.positive))
            .collect();
        Ok(Diagram::new(crossings, loops)?.relabeled())
    }

    /// Adjacency of components through crossings.
    fn component_graph_connected(&self) -> bool {
        let m = self.component_count();
        if m <= 1 {
            return true;
        }
        let mut uf = UnionFind::new(m);
        for x in 0..self.crossings.len() {
            let (u, o) = self.strand_components(x);
            uf.union(u, o);
        }
        (1..m).all(|i| uf.find(i) == uf.find(0))
    }

    /// True if the components split into two nonempty sets with no crossing
    /// between them. This is a sufficient condition for the link to be split.
    pub fn is_visibly_split(&self) -> bool {
        !self.component_graph_connected()
    }

    /// Renumbers arcs `1..` along components in component order. The result
    /// is stable under serialization and reparsing.
    pub fn relabeled(&self) -> Diagram {
        self.relabeled_in_order(&(0..self.components.len()).collect::<Vec<_>>())
    }

    /// Like [`Diagram::relabeled`], numbering components in the given order
    /// so that they come out in that order.
    pub(crate) fn relabeled_in_order(&self, order: &[usize]) -> Diagram {
        debug_assert_eq!(order.len(), self.components.len());
        let mut map: HashMap<ArcId, ArcId> = HashMap::new();
        let mut next = 1;
        for cycle in order.iter().map(|&c| &self.components[c]) {
            let start = self.relabel_start(cycle);
            for k in 0..cycle.len() {
                map.insert(cycle[(start + k) % cycle.len()], next);
                next += 1;
            }
        }
        let crossings = self.crossings.iter().map(|c| Crossing::new(c.slots.map(|a| map[&a]), c.positive)).collect();
        let mut d = Diagram::new(crossings, self.free_loops).expect("relabeling preserves validity");
        d.name = self.name.clone();
        d
    }

    /// Starting arc for relabeling a component so that label-order inference
    /// of over-only components reproduces the stored orientation.
    fn relabel_start(&self, cycle: &[ArcId]) -> usize {
        let over_only = cycle.iter().all(|a| {
            let e = self.arcs[a];
            e.head.1 % 2 == 1 && e.tail.1 % 2 == 1
        });
        if over_only && cycle.len() == 2 {
            // the smaller label must leave the earlier crossing
            let t0 = self.arcs[&cycle[0]].tail.0;
            let t1 = self.arcs[&cycle[1]].tail.0;
            if t1 < t0 {
                return 1;
            }
        }
        0
    }

    pub fn to_raw(&self) -> RawDiagram {
        RawDiagram {
            crossings: self.crossings.iter().map(|c| c.slots).collect(),
            free_loops: Some(self.free_loops),
            name: self.name.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("diagram serializes")
    }

    /// Compact text form `X(a,b,c,d) ... O`.
    pub fn to_pd_text(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("X({},{},{},{})", c.slots[0], c.slots[1], c.slots[2], c.slots[3]))
            .collect();
        parts.extend(std::iter::repeat_n("O".to_string(), self.free_loops));
        parts.join(" ")
    }

    /// Parses JSON (`{"crossings": ..., "free_loops": ...}`) or the compact
    /// text form, then validates.
    pub fn parse(input: &str) -> Result<Diagram> {
        RawDiagram::parse(input)?.validate()
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_text())
    }
}

/// Unvalidated PD data as read from JSON or text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDiagram {
    pub crossings: Vec<[ArcId; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_loops: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl RawDiagram {
    pub fn parse(input: &str) -> Result<RawDiagram> {
        let trimmed = input.trim();
        if trimmed.starts_with('{') {
            Ok(serde_json::from_str(trimmed)?)
        } else {
            parse_pd_text(trimmed)
        }
    }

    pub fn validate(&self) -> Result<Diagram> {
        if self.crossings.is_empty() && self.free_loops.is_none() {
            return Err(Error::validation("empty diagram without an explicit free_loops count"));
        }
        let positive = infer_orientation(&self.crossings)?;
        let crossings = self
            .crossings
            .iter()
            .zip(positive)
            .map(|(s, p)| Crossing::new(*s, p))
            .collect();
        let mut d = Diagram::new(crossings, self.free_loops.unwrap_or(0))?;
        d.name = self.name.clone();
        Ok(d)
    }
}

fn parse_pd_text(s: &str) -> Result<RawDiagram> {
    let mut raw = RawDiagram::default();
    let mut loops = 0;
    let body = s.strip_prefix("PD").map(|r| r.trim()).unwrap_or(s);
    let body = body
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .or_else(|| body.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
        .filter(|_| s.starts_with("PD"))
        .unwrap_or(body);
    let mut rest = body.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        if rest.is_empty() {
            break;
        }
        if let Some(r) = rest.strip_prefix('O') {
            loops += 1;
            rest = r;
            continue;
        }
        let Some(r) = rest.strip_prefix('X') else {
            return Err(Error::parse(format!("expected X(...) or O at {:?}", truncate(rest))));
        };
        let (open, close) = match r.chars().next() {
            Some('(') => ('(', ')'),
            Some('[') => ('[', ']'),
            _ => return Err(Error::parse(format!("expected '(' after X at {:?}", truncate(rest)))),
        };
        let end = r
            .find(close)
            .ok_or_else(|| Error::parse(format!("unterminated crossing at {:?}", truncate(rest))))?;
        let inner = &r[open.len_utf8()..end];
        let labels: Vec<ArcId> = inner
            .split(',')
            .map(|t| t.trim().parse::<ArcId>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(format!("bad arc label in X{open}{inner}{close}")))?;
        let slots: [ArcId; 4] = labels
            .try_into()
            .map_err(|_| Error::parse(format!("crossing X{open}{inner}{close} needs 4 labels")))?;
        raw.crossings.push(slots);
        rest = &r[end + close.len_utf8()..];
    }
    if raw.crossings.is_empty() && loops == 0 {
        return Err(Error::validation("empty diagram without an explicit free_loops count"));
    }
    raw.free_loops = Some(loops);
    Ok(raw)
}

fn truncate(s: &str) -> &str {
    match s.char_indices().nth(24) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

/// Decides the over-strand direction at each crossing of a bare PD code.
/// Returns the `positive` flag per crossing.
pub(crate) fn infer_orientation(crossings: &[[ArcId; 4]]) -> Result<Vec<bool>> {
    let mut occ: BTreeMap<ArcId, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, c) in crossings.iter().enumerate() {
        for (s, &a) in c.iter().enumerate() {
            occ.entry(a).or_default().push((x, s));
        }
    }
    if let Some((a, v)) = occ.iter().find(|(_, v)| v.len() != 2) {
        return Err(Error::validation(format!("arc multiplicity: arc {a} used {} times", v.len())));
    }
    let partner = |a: ArcId, o: (usize, usize)| {
        let v = &occ[&a];
        if v[0] == o {
            v[1]
        } else {
            v[0]
        }
    };

    let mut head_slot: HashMap<(usize, usize), bool> = HashMap::new();
    for &start in occ.keys() {
        let first = occ[&start][0];
        if head_slot.contains_key(&first) {
            continue;
        }
        // walk one way: `o` is where the current arc leaves
        let mut walk: Vec<WalkStep> = Vec::new();
        let mut o = first;
        loop {
            let a = crossings[o.0][o.1];
            let p = partner(a, o);
            walk.push((a, o, p));
            let next = (p.0, (p.1 + 2) % 4);
            if next == first {
                break;
            }
            if walk.len() > 4 * crossings.len() {
                return Err(Error::validation("inconsistent orientation: arc cycle does not close"));
            }
            o = next;
        }
        // constraints from under-strand slots: slot 0 is a head, slot 2 a tail
        let mut forward_ok = true;
        let mut backward_ok = true;
        let mut constrained = false;
        for &(_, t, h) in &walk {
            for (occ_pt, is_head) in [(t, false), (h, true)] {
                match occ_pt.1 {
                    0 => {
                        constrained = true;
                        forward_ok &= is_head;
                        backward_ok &= !is_head;
                    }
                    2 => {
                        constrained = true;
                        forward_ok &= !is_head;
                        backward_ok &= is_head;
                    }
                    _ => {}
                }
            }
        }
        let forward = if constrained {
            match (forward_ok, backward_ok) {
                (true, _) => true,
                (false, true) => false,
                (false, false) => {
                    return Err(Error::validation(format!(
                        "inconsistent orientation on the component through arc {start}"
                    )))
                }
            }
        } else {
            fallback_direction(&walk)
        };
        for &(_, t, h) in &walk {
            let (tail, head) = if forward { (t, h) } else { (h, t) };
            head_slot.insert(head, true);
            head_slot.insert(tail, false);
        }
    }

    crossings
        .iter()
        .enumerate()
        .map(|(x, _)| {
            let h1 = head_slot[&(x, 1)];
            let h3 = head_slot[&(x, 3)];
            if h1 == h3 {
                Err(Error::validation(format!(
                    "inconsistent orientation: over-strand at crossing {x} has two {}",
                    if h1 { "heads" } else { "tails" }
                )))
            } else {
                Ok(h3)
            }
        })
        .collect()
}

/// `(arc, tail, head)` with ends as `(crossing, slot)`.
type WalkStep = (ArcId, (usize, usize), (usize, usize));

/// Direction for a component that only passes over: the arc after the
/// smallest label is the next larger label; two-arc components leave the
/// earlier crossing on their smaller label.
fn fallback_direction(walk: &[WalkStep]) -> bool {
    let n = walk.len();
    let (i0, &(l0, t0, h0)) = walk.iter().enumerate().min_by_key(|(_, w)| w.0).expect("nonempty cycle");
    match n {
        1 => t0.1 < h0.1,
        2 => t0.0 <= h0.0,
        _ => {
            let mut sorted: Vec<ArcId> = walk.iter().map(|w| w.0).collect();
            sorted.sort_unstable();
            let l1 = sorted.iter().copied().find(|&l| l != l0).unwrap_or(l0);
            walk[(i0 + 1) % n].0 == l1
        }
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.size.fill(1);
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(s: &str) -> Diagram {
        Diagram::parse(s).unwrap()
    }

    #[test]
    fn unknot_from_free_loop() {
        let d = pd(r#"{"crossings": [], "free_loops": 1}"#);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.writhe(), 0);
        assert_eq!(pd("O"), Diagram::unknot());
    }

    #[test]
    fn empty_without_loops_rejected() {
        assert!(matches!(Diagram::parse(r#"{"crossings": []}"#), Err(Error::Validation(_))));
        assert!(matches!(Diagram::parse(""), Err(Error::Validation(_))));
    }

    #[test]
    fn arc_multiplicity_rejected() {
        let err = Diagram::parse("X(1,1,2,1) X(2,3,3,4)").unwrap_err();
        assert!(err.to_string().contains("arc multiplicity"), "{err}");
    }

    #[test]
    fn inconsistent_orientation_rejected() {
        // arc 1 enters both crossings as the incoming under-strand
        let err = Diagram::parse("X(1,3,2,4) X(1,4,2,3)").unwrap_err();
        assert!(err.to_string().contains("orientation"), "{err}");
    }

    #[test]
    fn trefoil_validates() {
        let d = pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)");
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.writhe().abs(), 3);
    }

    #[test]
    fn text_forms() {
        let a = pd("X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]");
        let b = pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]");
        let c = pd(r#"{"crossings": [[1,5,2,4],[3,1,4,6],[5,3,6,2]]}"#);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(Diagram::parse("X(1,2,3)").is_err());
        assert!(Diagram::parse("Y(1,2,3,4)").is_err());
    }

    #[test]
    fn hopf_linking() {
        let h = pd("X(4,1,3,2) X(2,3,1,4)");
        assert_eq!(h.component_count(), 2);
        let lk = h.linking_matrix()[0][1];
        assert_eq!(lk.abs(), 1);
        assert_eq!(h.linking_matrix()[0][0], 0);
        let r = h.reverse_component(0).unwrap();
        assert_eq!(r.linking_matrix()[0][1], -lk);
        assert_eq!(h.reverse_all().writhe(), h.writhe());
        assert!(!h.is_visibly_split());
        assert!(h.reverse_component(2).is_err());
    }

    #[test]
    fn mirror_involution() {
        let d = pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)");
        assert_eq!(d.mirror().mirror(), d);
        assert_eq!(d.mirror().writhe(), -d.writhe());
        assert_eq!(Diagram::unknot().mirror(), Diagram::unknot());
    }

    #[test]
    fn disjoint_union_splits() {
        let t = pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)");
        let u = t.disjoint_union(&Diagram::unknot());
        assert_eq!(u.component_count(), 2);
        assert!(u.is_visibly_split());
        assert_eq!(t.disjoint_union(&Diagram::empty()), t);
        assert!(t.disjoint_union(&t).is_visibly_split());
    }

    #[test]
    fn round_trip_json_and_text() {
        let d = pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2) O");
        assert_eq!(Diagram::parse(&d.to_json()).unwrap(), d);
        assert_eq!(Diagram::parse(&d.to_pd_text()).unwrap(), d);
    }

    #[test]
    fn over_only_component_round_trips_after_relabel() {
        // component {3,4} only passes over: its direction comes from labels
        let d = pd("X(1,4,2,3) X(2,4,1,3)");
        for v in [d.clone(), d.mirror(), d.reverse_component(1).unwrap(), d.mirror().reverse_component(0).unwrap()] {
            let r = v.relabeled();
            assert_eq!(Diagram::parse(&r.to_json()).unwrap(), r);
            assert_eq!(r.writhe(), v.writhe());
        }
    }

    #[test]
    fn non_planar_code_rejected() {
        let e = Diagram::parse("X(1,3,2,4) X(2,4,1,3)").unwrap_err();
        assert!(matches!(e, Error::Validation(m) if m.contains("planar")));
    }
}
