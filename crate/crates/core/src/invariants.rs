//! Invariant engines: Kauffman bracket, Jones polynomial, Seifert data and
//! the Conway polynomial.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{bracket_to_jones, BracketPoly, ConwayPoly, HalfLaurent, Laurent};
use crate::pdcode::{ArcId, Diagram, UnionFind};

pub const DEFAULT_CROSSING_CAP: usize = 24;

/// Environment variable that overrides [`DEFAULT_CROSSING_CAP`].
pub const CAP_ENV: &str = "LINKFORGE_CROSSING_CAP";

/// Resource limits for the exponential state sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub crossing_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { crossing_cap: DEFAULT_CROSSING_CAP }
    }
}

impl Limits {
    pub fn with_cap(crossing_cap: usize) -> Self {
        Limits { crossing_cap }
    }

    /// Default limits, with the cap taken from `LINKFORGE_CROSSING_CAP` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAP_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Limits::with_cap)
                .map_err(|_| Error::parse(format!("{CAP_ENV} must be a nonnegative integer, got {v:?}"))),
            Err(_) => Ok(Limits::default()),
        }
    }
}

/// Dense arc indices and the two smoothings of every crossing.
struct Smoothings {
    arcs: usize,
    // A-smoothing joins slots (0,1) and (2,3); B joins (0,3) and (1,2)
    a_pairs: Vec<[(usize, usize); 2]>,
    b_pairs: Vec<[(usize, usize); 2]>,
}

impl Smoothings {
    fn new(d: &Diagram) -> Self {
        let index: HashMap<ArcId, usize> = d.arc_ids().enumerate().map(|(i, a)| (a, i)).collect();
        let mut a_pairs = Vec::with_capacity(d.crossing_count());
        let mut b_pairs = Vec::with_capacity(d.crossing_count());
        for c in d.crossings() {
            let s = c.slots.map(|a| index[&a]);
            a_pairs.push([(s[0], s[1]), (s[2], s[3])]);
            b_pairs.push([(s[0], s[3]), (s[1], s[2])]);
        }
        Smoothings { arcs: index.len(), a_pairs, b_pairs }
    }

    /// Number of loops in the state given by `mask` (bit set = B-smoothing).
    fn loops(&self, mask: u64, uf: &mut UnionFind) -> usize {
        uf.reset();
        let mut loops = self.arcs;
        for (x, (a, b)) in self.a_pairs.iter().zip(&self.b_pairs).enumerate() {
            let pairs = if mask >> x & 1 == 1 { b } else { a };
            for &(p, q) in pairs {
                if uf.union(p, q) {
                    loops -= 1;
                }
            }
        }
        loops
    }
}

fn check_cap(d: &Diagram, limits: Limits) -> Result<()> {
    let c = d.crossing_count();
    if c > limits.crossing_cap || c > 62 {
        return Err(Error::CrossingCap { crossings: c, cap: limits.crossing_cap.min(62) });
    }
    Ok(())
}

/// Counts states by (number of A-smoothings, number of loops).
fn state_histogram(d: &Diagram) -> Vec<Vec<u64>> {
    let c = d.crossing_count();
    let sm = Smoothings::new(d);
    let total: u64 = 1 << c;
    let chunk = 1u64 << c.saturating_sub(8).min(16);
    let blank = || vec![vec![0u64; sm.arcs + 1]; c + 1];
    (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|k| {
            let mut hist = blank();
            let mut uf = UnionFind::new(sm.arcs);
            for mask in k * chunk..((k + 1) * chunk).min(total) {
                let a = c - mask.count_ones() as usize;
                hist[a][sm.loops(mask, &mut uf)] += 1;
            }
            hist
        })
        .reduce(blank, |mut acc, h| {
            for (ra, rh) in acc.iter_mut().zip(h) {
                for (x, y) in ra.iter_mut().zip(rh) {
                    *x += y;
                }
            }
            acc
        })
}

pub fn kauffman_bracket(d: &Diagram) -> Result<BracketPoly> {
    kauffman_bracket_with(d, Limits::default())
}

/// Sum over all smoothings of `A^(a-b) delta^(loops-1)`, free loops included.
pub fn kauffman_bracket_with(d: &Diagram, limits: Limits) -> Result<BracketPoly> {
    if d.is_empty() {
        return Err(Error::domain("the bracket of the empty diagram is undefined"));
    }
    check_cap(d, limits)?;
    let c = d.crossing_count() as i64;
    let hist = state_histogram(d);
    let delta = BracketPoly::delta().0;
    let max_loops = hist.iter().flat_map(|r| r.iter().rposition(|&n| n > 0)).max().unwrap_or(0);
    let free = d.free_loops();
    let delta_pows: Vec<Laurent> = (0..=max_loops + free).map(|k| delta.pow(k as u32)).collect();
    let mut out = Laurent::zero();
    for (a, row) in hist.iter().enumerate() {
        let shift = 2 * a as i64 - c;
        for (loops, &n) in row.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let total = loops + free;
            let term = delta_pows[total - 1].shift(shift);
            out = &out + &(&term * &Laurent::monomial(0, BigInt::from(n)));
        }
    }
    Ok(BracketPoly(out))
}

pub fn jones(d: &Diagram) -> Result<HalfLaurent> {
    jones_with(d, Limits::default())
}

pub fn jones_with(d: &Diagram, limits: Limits) -> Result<HalfLaurent> {
    if d.is_empty() {
        return Err(Error::domain("the Jones polynomial of the empty diagram is undefined"));
    }
    bracket_to_jones(&kauffman_bracket_with(d, limits)?, d.writhe())
}

/// Canonical Seifert surface data: circle count, crossing count and first
/// Betti number, plus the Seifert matrix when requested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertData {
    pub circles: usize,
    pub crossings: usize,
    pub betti: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub matrix: Vec<Vec<i64>>,
}

impl SeifertData {
    /// Upper bound on the genus of the canonical surface's closed-up knot
    /// (`betti / 2` rounded down, exact only for the canonical surface).
    pub fn genus_bound(&self) -> usize {
        self.betti / 2
    }
}

/// Faces, Seifert circles and the nesting of the canonical surface.
struct SeifertSurface {
    /// crossings visited by each circle, in order
    circle_crossings: Vec<Vec<usize>>,
    depth: Vec<usize>,
    /// +1 if the disk lies to the left of its oriented boundary circle
    normal: Vec<i64>,
    under_circle: Vec<usize>,
    over_circle: Vec<usize>,
    sign: Vec<i64>,
}

fn require_connected(d: &Diagram) -> Result<()> {
    if d.is_empty() {
        return Err(Error::domain("empty diagram has no Seifert surface"));
    }
    if d.is_visibly_split() {
        return Err(Error::domain("diagram is visibly split; its canonical Seifert surface is not connected"));
    }
    Ok(())
}

fn faces(d: &Diagram) -> HashMap<(usize, usize), usize> {
    d.face_map().0
}

impl SeifertSurface {
    fn build(d: &Diagram) -> Result<Self> {
        let face_of = faces(d);
        let cr = d.crossings();
        // oriented smoothing: incoming slot -> outgoing slot
        let smooth_out = |x: usize, s: usize| -> usize {
            match (cr[x].positive, s) {
                (true, 0) => 1,
                (true, 3) => 2,
                (false, 0) => 3,
                (false, 1) => 2,
                _ => unreachable!("not an incoming slot"),
            }
        };

        let mut circle_of_arc = HashMap::new();
        let mut circle_arcs: Vec<Vec<ArcId>> = Vec::new();
        let mut circle_crossings = Vec::new();
        for a0 in d.arc_ids() {
            if circle_of_arc.contains_key(&a0) {
                continue;
            }
            let id = circle_arcs.len();
            let (mut arcs, mut xs) = (Vec::new(), Vec::new());
            let mut a = a0;
            loop {
                circle_of_arc.insert(a, id);
                arcs.push(a);
                let (x, s) = d.arc(a).expect("arc").head;
                xs.push(x);
                a = cr[x].slots[smooth_out(x, s)];
                if a == a0 {
                    break;
                }
            }
            circle_arcs.push(arcs);
            circle_crossings.push(xs);
        }
        let n_circles = circle_arcs.len();

        // regions of the plane minus the circles: faces glued through the
        // channel between the two smoothing arcs at each crossing
        let n_faces = d.crossing_count() + 2;
        let mut uf = UnionFind::new(n_faces);
        for (x, c) in cr.iter().enumerate() {
            let corner = |k: usize| face_of[&(x, k)]; // corner between slots k and k+1
            if c.positive {
                uf.union(corner(1), corner(3));
            } else {
                uf.union(corner(0), corner(2));
            }
        }
        let mut left = vec![0; n_circles];
        let mut right = vec![0; n_circles];
        for (ci, arcs) in circle_arcs.iter().enumerate() {
            let e = d.arc(arcs[0]).expect("arc");
            left[ci] = uf.find(face_of[&e.tail]);
            right[ci] = uf.find(face_of[&e.head]);
        }

        // walk the region/circle tree from the region holding face 0
        let root = uf.find(0);
        let mut depth = vec![usize::MAX; n_circles];
        let mut normal = vec![0; n_circles];
        let mut region_depth: HashMap<usize, usize> = HashMap::from([(root, 0)]);
        let mut frontier = vec![root];
        while let Some(r) = frontier.pop() {
            let rd = region_depth[&r];
            for ci in 0..n_circles {
                if depth[ci] != usize::MAX || (left[ci] != r && right[ci] != r) {
                    continue;
                }
                let inner = if left[ci] == r { right[ci] } else { left[ci] };
                depth[ci] = rd;
                normal[ci] = if inner == left[ci] { 1 } else { -1 };
                if region_depth.insert(inner, rd + 1).is_none() {
                    frontier.push(inner);
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(Error::Invariant("Seifert circles do not form a nesting tree".into()));
        }

        let under_circle: Vec<usize> = cr.iter().map(|c| circle_of_arc[&c.slots[0]]).collect();
        let over_circle: Vec<usize> = cr.iter().map(|c| circle_of_arc[&c.slots[c.over_in()]]).collect();
        if under_circle.iter().zip(&over_circle).any(|(u, o)| u == o) {
            return Err(Error::Invariant("a crossing joins a Seifert circle to itself".into()));
        }
        let sign = cr.iter().map(|c| c.sign()).collect();
        Ok(SeifertSurface { circle_crossings, depth, normal, under_circle, over_circle, sign })
    }

    fn circle_count(&self) -> usize {
        self.circle_crossings.len()
    }

    /// Fundamental cycles of the Seifert graph: each is a list of
    /// `(crossing, +1 if traversed from its under circle to its over circle)`.
    fn cycle_basis(&self) -> Vec<Vec<(usize, i64)>> {
        let n = self.circle_count();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for x in 0..self.under_circle.len() {
            adj[self.under_circle[x]].push((x, self.over_circle[x]));
            adj[self.over_circle[x]].push((x, self.under_circle[x]));
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (edge, parent circle)
        let mut seen = vec![false; n];
        let mut order = vec![0];
        let mut tree_edge = vec![false; self.under_circle.len()];
        let mut level = vec![0usize; n];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &(x, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((x, v));
                    level[w] = level[v] + 1;
                    tree_edge[x] = true;
                    order.push(w);
                }
            }
        }
        let step = |x: usize, from: usize| if self.under_circle[x] == from { 1 } else { -1 };
        let mut cycles = Vec::new();
        for x in 0..self.under_circle.len() {
            if tree_edge[x] {
                continue;
            }
            // u --x--> v, then back from v to u through the tree
            let (u, v) = (self.under_circle[x], self.over_circle[x]);
            let mut up_from_v = Vec::new();
            let mut up_from_u = Vec::new();
            let (mut a, mut b) = (v, u);
            while a != b {
                if level[a] >= level[b] {
                    let (e, p) = parent[a].expect("non-root");
                    up_from_v.push((e, step(e, a)));
                    a = p;
                } else {
                    let (e, p) = parent[b].expect("non-root");
                    up_from_u.push((e, step(e, p)));
                    b = p;
                }
            }
            let mut cycle = vec![(x, 1)];
            cycle.extend(up_from_v);
            cycle.extend(up_from_u.into_iter().rev());
            cycles.push(cycle);
        }
        cycles
    }

    /// Seifert form `lk(a_i, a_j^+)` on the fundamental cycles.
    fn matrix(&self) -> Vec<Vec<i64>> {
        let cycles = self.cycle_basis();
        let curves: Vec<Curve> = cycles.iter().enumerate().map(|(i, c)| self.curve(c, 4 * (i as i64 + 1))).collect();
        let n = curves.len();
        let mut v = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let other = if i == j { self.curve(&cycles[j], 4 * (j as i64 + 1) + 1) } else { curves[j].clone() };
                let twice = self.twice_linking(&curves[i], &other);
                assert!(twice % 2 == 0, "half-integral linking number in Seifert form");
                v[i][j] = twice / 2;
            }
        }
        v
    }

    /// Sort key of a band attachment on circle `ci`: position along the
    /// circle, then width across the band in the circle's direction.
    fn attach_key(&self, ci: usize, x: usize, width: i64) -> (usize, i64) {
        let pos = self.circle_crossings[ci].iter().position(|&y| y == x).expect("crossing on circle");
        (pos, if self.under_circle[x] == ci { width } else { -width })
    }

    fn curve(&self, cycle: &[(usize, i64)], width: i64) -> Curve {
        let mut bands = Vec::new();
        let mut segments = Vec::new();
        let len = cycle.len();
        for k in 0..len {
            let (x, dir) = cycle[k];
            let (from, to) = if dir == 1 {
                (self.under_circle[x], self.over_circle[x])
            } else {
                (self.over_circle[x], self.under_circle[x])
            };
            bands.push(BandUse { crossing: x, dir, from, to, width });
            let (y, _) = cycle[(k + 1) % len];
            segments.push(Segment {
                circle: to,
                enter: self.attach_key(to, x, width),
                leave: self.attach_key(to, y, width),
            });
        }
        Curve { bands, segments }
    }

    fn is_child(&self, parent: usize, child: usize) -> bool {
        self.depth[child] == self.depth[parent] + 1
    }

    /// Twice the linking number of `a` with the positive pushoff of `b`,
    /// summed over the crossings of their projections.
    ///
    /// Disks sit at height equal to their nesting depth and curves run in a
    /// thin collar just inside each circle, so projections meet only in the
    /// half-twisted bands, inside a shared disk, or where a collar passes
    /// under a band rising to a nested circle.
    fn twice_linking(&self, a: &Curve, b: &Curve) -> i64 {
        let mut total = 0;
        for ba in &a.bands {
            for bb in b.bands.iter().filter(|bb| bb.crossing == ba.crossing) {
                total -= self.sign[ba.crossing] * ba.dir * bb.dir;
            }
        }
        for sa in &a.segments {
            for sb in b.segments.iter().filter(|sb| sb.circle == sa.circle) {
                let p_in = in_forward(sa.enter, sa.leave, sb.enter);
                let q_in = in_forward(sa.enter, sa.leave, sb.leave);
                if p_in != q_in {
                    total += if p_in { -1 } else { 1 };
                }
            }
        }
        for (collar, banded) in [(a, b), (b, a)] {
            for s in &collar.segments {
                for bu in &banded.bands {
                    let (other, toward_child) = if bu.from == s.circle {
                        (bu.to, 1)
                    } else if bu.to == s.circle {
                        (bu.from, -1)
                    } else {
                        continue;
                    };
                    if !self.is_child(s.circle, other) {
                        continue;
                    }
                    let key = self.attach_key(s.circle, bu.crossing, bu.width);
                    if in_forward(s.enter, s.leave, key) {
                        total -= self.normal[s.circle] * toward_child;
                    }
                }
            }
        }
        total
    }
}

/// True if `r` lies strictly inside the cyclic interval running forward from `p` to `q`.
fn in_forward(p: (usize, i64), q: (usize, i64), r: (usize, i64)) -> bool {
    if p < q {
        p < r && r < q
    } else {
        r > p || r < q
    }
}

#[derive(Clone, Debug)]
struct BandUse {
    crossing: usize,
    dir: i64,
    from: usize,
    to: usize,
    width: i64,
}

#[derive(Clone, Debug)]
struct Segment {
    circle: usize,
    enter: (usize, i64),
    leave: (usize, i64),
}

#[derive(Clone, Debug)]
struct Curve {
    bands: Vec<BandUse>,
    segments: Vec<Segment>,
}

/// Determinant by fraction-free elimination over the Laurent ring.
pub(crate) fn determinant(mut m: Vec<Vec<Laurent>>) -> Laurent {
    let n = m.len();
    if n == 0 {
        return Laurent::one();
    }
    let mut negate = false;
    let mut prev = Laurent::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Laurent::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .divide_exact(&prev)
                    .expect("nonzero pivot")
                    .expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Counts Seifert circles of the oriented smoothing.
pub fn seifert_circles(d: &Diagram) -> Result<SeifertData> {
    require_connected(d)?;
    if d.crossing_count() == 0 {
        return Ok(SeifertData { circles: 1, crossings: 0, betti: 0, matrix: Vec::new() });
    }
    let surf = SeifertSurface::build(d)?;
    let s = surf.circle_count();
    let c = d.crossing_count();
    Ok(SeifertData { circles: s, crossings: c, betti: c + 1 - s, matrix: Vec::new() })
}

/// Seifert circles plus the Seifert matrix of the canonical surface on a
/// basis of fundamental cycles of the Seifert graph.
pub fn seifert_matrix(d: &Diagram) -> Result<SeifertData> {
    let mut data = seifert_circles(d)?;
    if data.crossings > 0 {
        data.matrix = SeifertSurface::build(d)?.matrix();
    }
    Ok(data)
}

/// Conway polynomial from the Seifert matrix; visibly split diagrams return 0.
/// Normalized by the skein relation `C(L+) - C(L-) = z C(L0)`, so the
/// positive Hopf link has `z`.
pub fn conway(d: &Diagram) -> Result<ConwayPoly> {
    if d.is_empty() {
        return Err(Error::domain("the Conway polynomial of the empty diagram is undefined"));
    }
    if d.is_visibly_split() {
        return Ok(ConwayPoly::zero());
    }
    let v = seifert_matrix(d)?.matrix;
    ConwayPoly::from_x_laurent(&seifert_determinant(&v))
}

/// `det(x^(-1) V - x V^T)` as a Laurent polynomial in `x`, to be read in
/// `z = x - x^(-1)`.
pub fn seifert_determinant(v: &[Vec<i64>]) -> Laurent {
    let n = v.len();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Laurent::from_terms([(-1, v[i][j]), (1, -v[j][i])]))
                .collect()
        })
        .collect();
    determinant(m)
}
