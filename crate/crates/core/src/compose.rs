//! String links (tangles whose strands run bottom to top) and the operations
//! that build links from them: stacking, reflection, closures, doubles, and
//! connected sums of links along chosen components.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pdcode::{ArcId, Crossing, Diagram, Geo, RawDiagram, UnionFind};

/// An `m`-strand string link. Strand `k` starts at arc `bottom[k]` and ends
/// at arc `top[k]`; a strand without crossings is a single arc listed in both.
///
/// Boundary points sit on the box in counterclockwise order
/// `bottom[0..m]` (left to right), then `top[m-1..0]` (right to left).
#[derive(Clone, Debug)]
pub struct TangleDiagram {
    crossings: Vec<Crossing>,
    bottom: Vec<ArcId>,
    top: Vec<ArcId>,
    free_loops: usize,
    name: Option<String>,
    strands: Vec<Vec<ArcId>>,
    strand_of: HashMap<ArcId, usize>,
}

impl PartialEq for TangleDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.crossings == other.crossings
            && self.bottom == other.bottom
            && self.top == other.top
            && self.free_loops == other.free_loops
    }
}

impl Eq for TangleDiagram {}

/// Crossing whose strand directions are not yet known: arcs counterclockwise
/// with the under-strand on slots 0 and 2.
#[derive(Clone, Copy, Debug)]
struct Unoriented {
    ccw: [ArcId; 4],
}

impl TangleDiagram {
    /// Builds a string link from oriented crossings.
    pub fn new(crossings: Vec<Crossing>, bottom: Vec<ArcId>, top: Vec<ArcId>, free_loops: usize) -> Result<Self> {
        let raw: Vec<Unoriented> = crossings.iter().map(|c| Unoriented { ccw: c.slots }).collect();
        let t = Self::orient(&raw, bottom, top, free_loops, true)?;
        if t.crossings != crossings {
            return Err(Error::validation("crossing signs disagree with the strand orientation"));
        }
        Ok(t)
    }

    pub fn identity(m: usize) -> Self {
        let ends: Vec<ArcId> = (1..=m as ArcId).collect();
        Self::orient(&[], ends.clone(), ends, 0, true).expect("identity is a string link")
    }

    /// Orients every strand by walking up from its bottom endpoint. With
    /// `strict`, slot 0 must be the incoming under-arc (PD convention);
    /// otherwise the under-strand may be entered from either end.
    fn orient(raw: &[Unoriented], bottom: Vec<ArcId>, top: Vec<ArcId>, free_loops: usize, strict: bool) -> Result<Self> {
        let m = bottom.len();
        if m == 0 {
            return Err(Error::validation("a string link needs at least one strand"));
        }
        if top.len() != m {
            return Err(Error::validation(format!("{m} bottom endpoints but {} top endpoints", top.len())));
        }
        let mut occ: HashMap<ArcId, Vec<(usize, usize)>> = HashMap::new();
        for (x, c) in raw.iter().enumerate() {
            for (s, &a) in c.ccw.iter().enumerate() {
                occ.entry(a).or_default().push((x, s));
            }
        }
        let uses = |a: ArcId| occ.get(&a).map_or(0, Vec::len);
        let mut boundary = HashSet::new();
        for (&b, &t) in bottom.iter().zip(&top) {
            let ok = if b == t {
                uses(b) == 0 && boundary.insert(b)
            } else {
                uses(b) == 1 && uses(t) == 1 && boundary.insert(b) && boundary.insert(t)
            };
            if !ok {
                return Err(Error::validation(format!(
                    "endpoint arcs {b} and {t} must be distinct and meet exactly one crossing each"
                )));
            }
        }
        if let Some((a, o)) = occ.iter().find(|(a, o)| o.len() != 2 && !boundary.contains(*a)) {
            return Err(Error::validation(format!("arc multiplicity: arc {a} used {} times", o.len())));
        }

        let mut geo: Vec<Option<Geo>> = vec![None; raw.len()];
        let mut under_dir: Vec<Option<usize>> = vec![None; raw.len()];
        let mut over_dir: Vec<Option<usize>> = vec![None; raw.len()];
        let mut strands = Vec::with_capacity(m);
        let mut strand_of = HashMap::new();
        for k in 0..m {
            let mut path = vec![bottom[k]];
            let mut a = bottom[k];
            let mut at: Option<(usize, usize)> = None;
            loop {
                strand_of.insert(a, k);
                let next_end = occ.get(&a).and_then(|o| o.iter().copied().find(|&e| Some(e) != at));
                let Some((x, s)) = next_end else {
                    break;
                };
                let slot = if s % 2 == 0 { &mut under_dir[x] } else { &mut over_dir[x] };
                if slot.is_some() {
                    return Err(Error::validation("a strand passes the same crossing slot twice"));
                }
                *slot = Some(s);
                if strict && s == 2 {
                    return Err(Error::validation(format!(
                        "inconsistent orientation: strand {} runs against the under-arc convention at crossing {x}",
                        k + 1
                    )));
                }
                let out = (s + 2) % 4;
                at = Some((x, out));
                a = raw[x].ccw[out];
                path.push(a);
                if path.len() > 4 * raw.len() + 2 {
                    return Err(Error::validation("strand does not terminate"));
                }
            }
            if a != top[k] {
                return Err(Error::validation(format!("strand {} does not end at its top endpoint", k + 1)));
            }
            strands.push(path);
        }
        for x in 0..raw.len() {
            let (Some(u), Some(o)) = (under_dir[x], over_dir[x]) else {
                return Err(Error::validation(
                    "closed component with crossings inside a string link (only free loops are allowed)",
                ));
            };
            geo[x] = Some(Geo { ccw: raw[x].ccw, under_in: u, over_in: o });
        }
        let crossings = geo.into_iter().map(|g| g.expect("oriented").canonical()).collect();
        let t = TangleDiagram { crossings, bottom, top, free_loops, name: None, strands, strand_of };
        t.check_planar()?;
        Ok(t)
    }

    /// Euler check for the crossings plus one extra vertex standing for
    /// everything outside the box, with the boundary points around it.
    fn check_planar(&self) -> Result<()> {
        let m = self.bottom.len();
        let c = self.crossings.len();
        // half-edge ids: 4x+s at crossings, 4c+p around the outside vertex,
        // whose counterclockwise order is top[0..m] then bottom[m-1..0]
        let outer = |p: usize| 4 * c + p;
        let mut ends: HashMap<ArcId, Vec<usize>> = HashMap::new();
        for (x, cr) in self.crossings.iter().enumerate() {
            for (s, &a) in cr.slots.iter().enumerate() {
                ends.entry(a).or_default().push(4 * x + s);
            }
        }
        for k in 0..m {
            ends.entry(self.top[k]).or_default().push(outer(k));
            ends.entry(self.bottom[k]).or_default().push(outer(2 * m - 1 - k));
        }
        let total = 4 * c + 2 * m;
        let mut partner = vec![usize::MAX; total];
        for hs in ends.values() {
            debug_assert_eq!(hs.len(), 2);
            partner[hs[0]] = hs[1];
            partner[hs[1]] = hs[0];
        }
        let turn = |h: usize| {
            if h < 4 * c {
                4 * (h / 4) + (h % 4 + 3) % 4
            } else {
                outer((h - 4 * c + 2 * m - 1) % (2 * m))
            }
        };
        let mut seen = vec![false; total];
        let mut faces = 0;
        for start in 0..total {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                h = turn(partner[h]);
            }
        }
        let edges = total / 2;
        if c + 1 + faces != edges + 2 {
            return Err(Error::validation(format!(
                "string link is not planar with its endpoints in box order ({c} crossings, {faces} faces)"
            )));
        }
        Ok(())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn strand_count(&self) -> usize {
        self.bottom.len()
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

    pub fn bottom(&self) -> &[ArcId] {
        &self.bottom
    }

    pub fn top(&self) -> &[ArcId] {
        &self.top
    }

    /// Arcs of strand `k` from bottom to top.
    pub fn strand_arcs(&self, k: usize) -> &[ArcId] {
        &self.strands[k]
    }

    pub fn strand_of(&self, a: ArcId) -> Option<usize> {
        self.strand_of.get(&a).copied()
    }

    fn max_arc(&self) -> ArcId {
        self.strand_of.keys().copied().max().unwrap_or(0)
    }

    /// (under strand, over strand) at crossing `x`.
    fn strands_at(&self, x: usize) -> (usize, usize) {
        let c = &self.crossings[x];
        (self.strand_of[&c.slots[0]], self.strand_of[&c.slots[c.over_in()]])
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(Crossing::sign).sum()
    }

    /// Swaps over and under at every crossing.
    pub fn mirror(&self) -> TangleDiagram {
        let mut t = self.clone();
        t.crossings = self.crossings.iter().map(|c| c.geometry().mirrored().canonical()).collect();
        t.name = self.name.as_ref().map(|n| format!("mirror of {n}"));
        t
    }

    /// Renumbers arcs `1..` strand by strand.
    pub fn relabeled(&self) -> TangleDiagram {
        let mut map = HashMap::new();
        let mut next = 1;
        for path in &self.strands {
            for &a in path {
                map.insert(a, next);
                next += 1;
            }
        }
        self.map_arcs(|a| map[&a])
    }

    fn map_arcs(&self, f: impl Fn(ArcId) -> ArcId) -> TangleDiagram {
        TangleDiagram {
            crossings: self.crossings.iter().map(|c| Crossing::new(c.slots.map(&f), c.positive)).collect(),
            bottom: self.bottom.iter().map(|&a| f(a)).collect(),
            top: self.top.iter().map(|&a| f(a)).collect(),
            free_loops: self.free_loops,
            name: self.name.clone(),
            strands: self.strands.iter().map(|p| p.iter().map(|&a| f(a)).collect()).collect(),
            strand_of: self.strand_of.iter().map(|(&a, &k)| (f(a), k)).collect(),
        }
    }

    pub fn to_raw(&self) -> RawTangle {
        RawTangle {
            diagram: RawDiagram {
                crossings: self.crossings.iter().map(|c| c.slots).collect(),
                free_loops: Some(self.free_loops),
                name: self.name.clone(),
            },
            endpoints: Endpoints { bottom: self.bottom.clone(), top: self.top.clone() },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("tangle serializes")
    }

    pub fn parse(input: &str) -> Result<TangleDiagram> {
        let raw: RawTangle = serde_json::from_str(input.trim())?;
        raw.validate()
    }
}

/// JSON form: the diagram schema plus `"endpoints": {"bottom", "top"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawTangle {
    #[serde(flatten)]
    pub diagram: RawDiagram,
    pub endpoints: Endpoints,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Endpoints {
    pub bottom: Vec<ArcId>,
    pub top: Vec<ArcId>,
}

impl RawTangle {
    pub fn validate(&self) -> Result<TangleDiagram> {
        let raw: Vec<Unoriented> = self.diagram.crossings.iter().map(|&ccw| Unoriented { ccw }).collect();
        let mut t = TangleDiagram::orient(
            &raw,
            self.endpoints.bottom.clone(),
            self.endpoints.top.clone(),
            self.diagram.free_loops.unwrap_or(0),
            true,
        )?;
        t.name = self.diagram.name.clone();
        Ok(t)
    }
}

impl fmt::Display for TangleDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Which way the first listed strand of every cycle is traversed when
/// closing: `Top` walks it upward (leaving through the top of the box).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Top,
    Bottom,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Top => Side::Bottom,
            Side::Bottom => Side::Top,
        }
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Side> {
        match s.trim().to_ascii_lowercase().as_str() {
            "top" => Ok(Side::Top),
            "bottom" => Ok(Side::Bottom),
            other => Err(Error::parse(format!("unknown side {other:?} (expected top or bottom)"))),
        }
    }
}

/// How the endpoints of a string link are joined up outside the box.
///
/// A cycle `(i1 i2 ... ik)` walks strand `i1` in the direction given by the
/// side, then `i2` the opposite way, alternating: consecutive strands are
/// joined by caps over the top or cups under the bottom, and an odd cycle is
/// finished by one arc around the side of the box from `ik` back to `i1`.
/// 1-cycles are the standard closure; strands not mentioned are fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosurePattern {
    cycles: Vec<Vec<usize>>,
    side: Side,
}

/// A boundary point: `(strand, at_top)`.
type End = (usize, bool);

impl ClosurePattern {
    /// The standard closure.
    pub fn identity() -> Self {
        ClosurePattern::default()
    }

    /// Cycles use strand numbers starting at 1.
    pub fn from_cycles(cycles: &[Vec<usize>], side: Side) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for c in cycles {
            if c.is_empty() {
                continue;
            }
            for &s in c {
                if s == 0 {
                    return Err(Error::domain("strand numbers start at 1"));
                }
                if !seen.insert(s) {
                    return Err(Error::domain(format!("strand {s} appears twice in the pattern")));
                }
            }
            out.push(c.iter().map(|s| s - 1).collect());
        }
        Ok(ClosurePattern { cycles: out, side })
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// The pattern seen after turning the box upside down: the same pairing
    /// with every strand walked the other way.
    pub fn flipped(&self) -> Self {
        ClosurePattern { cycles: self.cycles.clone(), side: self.side.flipped() }
    }

    /// All cycles for `m` strands (fixed points included), ordered by their
    /// smallest strand, 0-based.
    pub fn cycles(&self, m: usize) -> Result<Vec<Vec<usize>>> {
        if let Some(&s) = self.cycles.iter().flatten().find(|&&s| s >= m) {
            return Err(Error::domain(format!("pattern mentions strand {} but the string link has {m}", s + 1)));
        }
        let mut all = self.cycles.clone();
        let listed: HashSet<usize> = all.iter().flatten().copied().collect();
        all.extend((0..m).filter(|s| !listed.contains(s)).map(|s| vec![s]));
        all.sort_by_key(|c| *c.iter().min().expect("nonempty cycle"));
        Ok(all)
    }

    fn walks_up(&self, index_in_cycle: usize) -> bool {
        index_in_cycle.is_multiple_of(2) == (self.side == Side::Top)
    }

    /// Boundary points joined outside the box, as `(strand, at_top)` pairs.
    fn joins(&self, m: usize) -> Result<Vec<(End, End)>> {
        let cycles = self.cycles(m)?;
        let mut joins = Vec::with_capacity(m);
        for c in &cycles {
            for (i, &s) in c.iter().enumerate() {
                let j = (i + 1) % c.len();
                let exit = (s, self.walks_up(i));
                let entry = (c[j], !self.walks_up(j));
                joins.push((exit, entry));
            }
        }
        Ok(joins)
    }

    /// Nesting check: the joining arcs, drawn outside the box, must not
    /// cross, i.e. no two chords interleave around the boundary circle.
    pub fn check_realizable(&self, m: usize) -> Result<()> {
        let pos = |(s, at_top): (usize, bool)| if at_top { 2 * m - 1 - s } else { s };
        let chords: Vec<(usize, usize)> = self
            .joins(m)?
            .into_iter()
            .map(|(a, b)| {
                let (p, q) = (pos(a), pos(b));
                (p.min(q), p.max(q))
            })
            .collect();
        for (i, &(a, b)) in chords.iter().enumerate() {
            for &(c, d) in &chords[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return Err(Error::domain(format!(
                        "closure pattern {self} is not realizable: its joining arcs would cross"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ClosurePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return f.write_str("()");
        }
        for c in &self.cycles {
            let parts: Vec<String> = c.iter().map(|s| (s + 1).to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Cycle notation such as `(1 2)(3)` or `(1,2)`; `id` or `()` for the
/// standard closure.
impl FromStr for ClosurePattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<ClosurePattern> {
        let t = s.trim();
        if t.is_empty() || t.eq_ignore_ascii_case("id") {
            return Ok(ClosurePattern::identity());
        }
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::parse(format!("expected '(' in closure pattern {s:?}")));
            };
            let end = body
                .find(')')
                .ok_or_else(|| Error::parse(format!("unclosed cycle in closure pattern {s:?}")))?;
            let cycle = body[..end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|w| !w.is_empty())
                .map(|w| w.parse::<usize>().map_err(|_| Error::parse(format!("bad strand number {w:?}"))))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = body[end + 1..].trim_start();
        }
        ClosurePattern::from_cycles(&cycles, Side::Top)
    }
}

/// Glues the top of `a` to the bottom of `b`, strand by strand.
pub fn stack(a: &TangleDiagram, b: &TangleDiagram) -> Result<TangleDiagram> {
    let m = a.strand_count();
    if b.strand_count() != m {
        return Err(Error::domain(format!(
            "strand-count mismatch: {m} strands stacked with {}",
            b.strand_count()
        )));
    }
    let off = a.max_arc();
    let glue: HashMap<ArcId, ArcId> = (0..m).map(|k| (b.bottom[k] + off, a.top[k])).collect();
    let f = |x: ArcId| {
        let y = x + off;
        glue.get(&y).copied().unwrap_or(y)
    };
    let mut crossings = a.crossings.clone();
    crossings.extend(b.crossings.iter().map(|c| Crossing::new(c.slots.map(f), c.positive)));
    let top = b.top.iter().map(|&x| f(x)).collect();
    let t = TangleDiagram::new(crossings, a.bottom.clone(), top, a.free_loops + b.free_loops)?;
    Ok(t.relabeled())
}

/// Turns the box upside down (the plane reflection that swaps bottom and
/// top) keeping which strand is over, then points the strands up again.
/// Every crossing sign flips.
pub fn reflect(l: &TangleDiagram) -> TangleDiagram {
    let crossings = l
        .crossings
        .iter()
        .map(|c| c.geometry().reflected().reverse_under().reverse_over().canonical())
        .collect();
    let mut t = TangleDiagram::new(crossings, l.top.clone(), l.bottom.clone(), l.free_loops)
        .expect("reflection of a string link is a string link");
    t.name = l.name.as_ref().map(|n| format!("reflection of {n}"));
    t
}

/// Joins the endpoints of `l` according to `p`. Components follow the
/// pattern's cycles in order of their smallest strand; free loops come last.
pub fn close(l: &TangleDiagram, p: &ClosurePattern) -> Result<Diagram> {
    let m = l.strand_count();
    p.check_realizable(m)?;
    let cycles = p.cycles(m)?;
    let mut up = vec![true; m];
    for c in &cycles {
        for (i, &s) in c.iter().enumerate() {
            up[s] = p.walks_up(i);
        }
    }
    let end = |(s, at_top): (usize, bool)| if at_top { l.top[s] } else { l.bottom[s] };

    let index: HashMap<ArcId, usize> = l.strand_of.keys().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut uf = UnionFind::new(index.len());
    for (exit, entry) in p.joins(m)? {
        uf.union(index[&end(exit)], index[&end(entry)]);
    }

    let mut label: HashMap<usize, ArcId> = HashMap::new();
    let mut free_loops = l.free_loops;
    for c in &cycles {
        if c.iter().all(|&s| l.bottom[s] == l.top[s]) {
            free_loops += 1;
            continue;
        }
        for &s in c {
            let path: Box<dyn Iterator<Item = &ArcId>> =
                if up[s] { Box::new(l.strands[s].iter()) } else { Box::new(l.strands[s].iter().rev()) };
            for a in path {
                let next = label.len() as ArcId + 1;
                label.entry(uf.find(index[a])).or_insert(next);
            }
        }
    }
    let crossings = (0..l.crossings.len())
        .map(|x| {
            let (u, o) = l.strands_at(x);
            let mut g = l.crossings[x].geometry();
            if !up[u] {
                g = g.reverse_under();
            }
            if !up[o] {
                g = g.reverse_over();
            }
            g.ccw = g.ccw.map(|a| label[&uf.find(index[&a])]);
            g.canonical()
        })
        .collect();
    let d = Diagram::new(crossings, free_loops)?.relabeled();
    Ok(match &l.name {
        Some(n) => d.with_name(format!("closure of {n}")),
        None => d,
    })
}

/// The closure of `l` stacked on its reflection.
pub fn double(l: &TangleDiagram) -> Result<Diagram> {
    let d = close(&stack(l, &reflect(l))?, &ClosurePattern::identity())?;
    Ok(match &l.name {
        Some(n) => d.with_name(format!("double of {n}")),
        None => d,
    })
}

/// Connected sum of component `i` of `l` with component `j` of `k`
/// (0-based), cutting arc `arc_l` of `l` and `arc_k` of `k` (the first arc
/// of the component when absent) and splicing so orientations agree.
///
/// Components of `l` keep their positions, component `i` absorbs component
/// `j`, and the other components of `k` follow in order. Loops without
/// crossings always come last, so a sum that gives a free loop crossings
/// can move it forward.
pub fn hashizume_sum(
    l: &Diagram,
    i: usize,
    k: &Diagram,
    j: usize,
    arc_l: Option<ArcId>,
    arc_k: Option<ArcId>,
) -> Result<Diagram> {
    let pick = |d: &Diagram, c: usize, arc: Option<ArcId>, which: &str| -> Result<Option<ArcId>> {
        if c >= d.component_count() {
            return Err(Error::domain(format!(
                "component {} out of range for the {which} diagram ({} components)",
                c + 1,
                d.component_count()
            )));
        }
        match arc {
            Some(a) if d.component_of(a) != Some(c) => {
                Err(Error::domain(format!("arc {a} is not on component {} of the {which} diagram", c + 1)))
            }
            Some(a) => Ok(Some(a)),
            None if d.is_free_loop(c) => Ok(None),
            None => Ok(Some(d.component_arcs(c)[0])),
        }
    };
    let a = pick(l, i, arc_l, "first")?;
    let b = pick(k, j, arc_k, "second")?;
    let u = l.disjoint_union(k);
    let off = l.max_arc();
    let mut crossings = u.crossings().to_vec();
    let free_loops = u.free_loops() - usize::from(a.is_none() || b.is_none());
    if let (Some(a), Some(b)) = (a, b) {
        let b = b + off;
        let (ha, hb) = (u.arc(a).expect("arc of l").head, u.arc(b).expect("arc of k").head);
        crossings[ha.0].slots[ha.1] = b;
        crossings[hb.0].slots[hb.1] = a;
    }
    let d = Diagram::new(crossings, free_loops).expect("connected sum of valid diagrams is valid");

    let others: Vec<usize> = (0..k.component_count()).filter(|&c| c != j).collect();
    let rank = |c: usize| {
        let arcs = d.component_arcs(c);
        if let Some(&x) = arcs.iter().find(|&&x| x <= off) {
            return l.component_of(x).expect("arc of l");
        }
        let kc = k.component_of(arcs[0] - off).expect("arc of k");
        if kc == j {
            i
        } else {
            l.component_count() + others.iter().position(|&o| o == kc).expect("other component")
        }
    };
    let crossing_components = d.component_count() - d.free_loops();
    let mut order: Vec<usize> = (0..crossing_components).collect();
    order.sort_by_key(|&c| rank(c));
    let d = d.relabeled_in_order(&order);
    Ok(match (l.name(), k.name()) {
        (Some(x), Some(y)) => d.with_name(format!("{x} # {y}")),
        _ => d,
    })
}

/// Ties `knots[c]` into component `c` of `l` for every present entry.
pub fn insert_local_knots(l: &Diagram, knots: &[Option<Diagram>]) -> Result<Diagram> {
    if knots.len() != l.component_count() {
        return Err(Error::domain(format!(
            "{} knots given for a link with {} components",
            knots.len(),
            l.component_count()
        )));
    }
    if let Some(c) = knots.iter().position(|k| k.as_ref().is_some_and(|k| k.component_count() != 1)) {
        return Err(Error::domain(format!("entry {} is not a knot", c + 1)));
    }
    let mut out = l.clone();
    // crossing components first: their positions are stable under sums
    for (c, knot) in knots.iter().enumerate() {
        if let (Some(knot), false) = (knot, l.is_free_loop(c)) {
            out = hashizume_sum(&out, c, knot, 0, None, None)?;
        }
    }
    for (c, knot) in knots.iter().enumerate() {
        if let (Some(knot), true) = (knot, l.is_free_loop(c)) {
            let first_free = out.component_count() - out.free_loops();
            out = hashizume_sum(&out, first_free, knot, 0, None, None)?;
        }
    }
    Ok(out)
}

/// Which strand of a crossing is on top, looking at the two strands as
/// they run up the page: `Rising` is the one going from lower left to
/// upper right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Over {
    Rising,
    Falling,
}

/// One horizontal slice of a tangle read from the bottom. Positions count
/// the strand points at the current height from the left, starting at 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorseOp {
    /// Points `pos` and `pos + 1` cross.
    Cross(usize, Over),
    /// A new arc appears as points `pos` and `pos + 1`.
    Cup(usize),
    /// Points `pos` and `pos + 1` are joined and disappear.
    Cap(usize),
}

/// Builds a string link on `m` strands from a Morse word. Strand directions
/// come from walking up from the bottom endpoints, so each strand must end
/// at the top point with its own index.
pub fn from_morse(m: usize, ops: &[MorseOp]) -> Result<TangleDiagram> {
    let mut next: ArcId = 0;
    let mut fresh = || {
        next += 1;
        next
    };
    let bottom: Vec<ArcId> = (0..m).map(|_| fresh()).collect();
    let mut points = bottom.clone();
    let mut raw: Vec<[ArcId; 4]> = Vec::new();
    let mut joins = Vec::new();
    let mut closed = Vec::new();
    let too_far = |pos: usize, len: usize| {
        Error::domain(format!("Morse step at position {pos} with only {len} points"))
    };
    for &op in ops {
        match op {
            MorseOp::Cross(p, over) => {
                if p + 1 >= points.len() {
                    return Err(too_far(p, points.len()));
                }
                let (bl, br, tl, tr) = (points[p], points[p + 1], fresh(), fresh());
                raw.push(match over {
                    Over::Rising => [br, tr, tl, bl],
                    Over::Falling => [bl, br, tr, tl],
                });
                points[p] = tl;
                points[p + 1] = tr;
            }
            MorseOp::Cup(p) => {
                if p > points.len() {
                    return Err(too_far(p, points.len()));
                }
                let a = fresh();
                points.splice(p..p, [a, a]);
            }
            MorseOp::Cap(p) => {
                if p + 1 >= points.len() {
                    return Err(too_far(p, points.len()));
                }
                let (a, b) = (points[p], points[p + 1]);
                if a == b {
                    closed.push(a);
                } else {
                    joins.push((a, b));
                }
                points.drain(p..p + 2);
            }
        }
    }
    if points.len() != m {
        return Err(Error::domain(format!("Morse word ends with {} points, expected {m}", points.len())));
    }
    let mut uf = UnionFind::new(next as usize + 1);
    let mut loops = Vec::new();
    for &(a, b) in &joins {
        if !uf.union(a as usize, b as usize) {
            loops.push(a);
        }
    }
    loops.extend(closed);
    let root = |uf: &mut UnionFind, a: ArcId| uf.find(a as usize) as ArcId;
    let used: HashSet<ArcId> = raw.iter().flatten().map(|&a| root(&mut uf, a)).collect();
    let mut free_loops = 0;
    for a in loops {
        if used.contains(&root(&mut uf, a)) {
            return Err(Error::validation(
                "closed component with crossings inside a string link (only free loops are allowed)",
            ));
        }
        free_loops += 1;
    }
    let raw: Vec<Unoriented> =
        raw.iter().map(|c| Unoriented { ccw: c.map(|a| root(&mut uf, a)) }).collect();
    let bottom = bottom.iter().map(|&a| root(&mut uf, a)).collect();
    let top = points.iter().map(|&a| root(&mut uf, a)).collect();
    Ok(TangleDiagram::orient(&raw, bottom, top, free_loops, false)?.relabeled())
}

/// The braid on `m` strands with generators `i` (`sigma_i`, the rising
/// strand over) and `-i` (its inverse), numbered from 1.
pub fn braid(m: usize, word: &[i32]) -> Result<TangleDiagram> {
    let ops = word
        .iter()
        .map(|&g| {
            let p = g.unsigned_abs() as usize;
            if p == 0 || p >= m {
                return Err(Error::domain(format!("braid generator {g} out of range for {m} strands")));
            }
            Ok(MorseOp::Cross(p - 1, if g > 0 { Over::Rising } else { Over::Falling }))
        })
        .collect::<Result<Vec<_>>>()?;
    from_morse(m, &ops)
}
