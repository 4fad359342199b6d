#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use linkforge::laurent::{ConwayPoly, HalfLaurent, Laurent};
use linkforge::pdcode::Crossing;
use linkforge::Diagram;

pub const TREFOIL: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";
pub const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";
pub const HOPF: &str = "X(4,1,3,2) X(2,3,1,4)";
pub const WHITEHEAD: &str = "X(6,1,7,2) X(10,7,5,8) X(4,5,1,6) X(2,10,3,9) X(8,4,9,3)";

pub fn pd(s: &str) -> Diagram {
    Diagram::parse(s).unwrap()
}

pub fn hl(s: &str) -> HalfLaurent {
    s.parse().unwrap()
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn knot_fixtures() -> Vec<(&'static str, Diagram)> {
    vec![
        ("unknot", Diagram::unknot()),
        ("trefoil", pd(TREFOIL)),
        ("figure-eight", pd(FIGURE_EIGHT)),
        ("hopf", pd(HOPF)),
        ("whitehead", pd(WHITEHEAD)),
    ]
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Jones polynomial by a direct state sum over all smoothings, with small-integer
/// coefficients and loop counting by union-find on arc labels.
pub fn oracle_jones(d: &Diagram) -> HalfLaurent {
    let xs = d.crossings();
    let n = xs.len();
    let mut labels: HashMap<u32, usize> = HashMap::new();
    for x in xs {
        for a in x.slots {
            let k = labels.len();
            labels.entry(a).or_insert(k);
        }
    }
    let arcs = labels.len();
    // <D> in powers of A
    let mut bracket: BTreeMap<i64, i64> = BTreeMap::new();
    for state in 0u64..(1u64 << n) {
        let mut p: Vec<usize> = (0..arcs).collect();
        let mut a_count = 0i64;
        for (k, x) in xs.iter().enumerate() {
            let s = x.slots.map(|a| labels[&a]);
            let (u, v, w, z) = if state >> k & 1 == 0 {
                a_count += 1;
                (s[0], s[1], s[2], s[3])
            } else {
                a_count -= 1;
                (s[0], s[3], s[1], s[2])
            };
            let (ru, rv) = (find(&mut p, u), find(&mut p, v));
            p[ru] = rv;
            let (rw, rz) = (find(&mut p, w), find(&mut p, z));
            p[rw] = rz;
        }
        let loops = (0..arcs).filter(|&i| find(&mut p, i) == i).count() + d.free_loops();
        // A^{a_count} * delta^{loops - 1}
        let mut term: BTreeMap<i64, i64> = BTreeMap::from([(a_count, 1)]);
        for _ in 1..loops {
            let mut next = BTreeMap::new();
            for (e, c) in term {
                *next.entry(e + 2).or_insert(0) -= c;
                *next.entry(e - 2).or_insert(0) -= c;
            }
            term = next;
        }
        for (e, c) in term {
            *bracket.entry(e).or_insert(0) += c;
        }
    }
    if n == 0 && d.free_loops() == 0 {
        return HalfLaurent::one();
    }
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    // (-A^3)^{-w} <D>, then A = t^{-1/4}: A^k -> t^{-k/4}
    HalfLaurent::from_half_terms(bracket.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| {
        let k = e - 3 * w;
        assert!(k % 2 == 0);
        (-k / 2, sign * c)
    }))
}

pub fn switch_crossing(x: Crossing) -> Crossing {
    let [a, b, c, d] = x.slots;
    if x.positive {
        Crossing::new([d, a, b, c], false)
    } else {
        Crossing::new([b, c, d, a], true)
    }
}

pub fn with_switched(d: &Diagram, k: usize) -> Diagram {
    let mut xs = d.crossings().to_vec();
    xs[k] = switch_crossing(xs[k]);
    Diagram::new(xs, d.free_loops()).unwrap()
}

/// The orientation-respecting smoothing of crossing `k`.
pub fn with_smoothed(d: &Diagram, k: usize) -> Diagram {
    let mut xs = d.crossings().to_vec();
    let x = xs.remove(k);
    let [a, b, c, dd] = x.slots;
    let pairs = if x.positive { [(a, b), (dd, c)] } else { [(a, dd), (b, c)] };
    let mut rename: HashMap<u32, u32> = HashMap::new();
    let mut loops = d.free_loops();
    let root = |m: &HashMap<u32, u32>, mut v: u32| {
        while let Some(&n) = m.get(&v) {
            v = n;
        }
        v
    };
    for (i, o) in pairs {
        let (ri, ro) = (root(&rename, i), root(&rename, o));
        if ri == ro {
            loops += 1;
        } else {
            rename.insert(ri, ro);
        }
    }
    let xs = xs
        .into_iter()
        .map(|y| Crossing::new(y.slots.map(|v| root(&rename, v)), y.positive))
        .collect();
    Diagram::new(xs, loops).unwrap()
}

/// Closure of an `m`-strand braid, strands running upward; generator `i > 0`
/// crosses positions `i-1, i` with the lower-left strand over.
pub fn braid_closure(m: usize, word: &[i32]) -> Diagram {
    let mut next = m as u32 + 1;
    let mut cur: Vec<u32> = (1..=m as u32).collect();
    let mut xs = Vec::new();
    for &g in word {
        let p = g.unsigned_abs() as usize - 1;
        let (x, y) = (cur[p], cur[p + 1]);
        let (x2, y2) = (next, next + 1);
        next += 2;
        if g > 0 {
            xs.push(Crossing::new([y, x2, y2, x], true));
        } else {
            xs.push(Crossing::new([x, y, x2, y2], false));
        }
        cur[p] = y2;
        cur[p + 1] = x2;
    }
    let mut close: HashMap<u32, u32> = HashMap::new();
    let mut loops = 0;
    for (p, &c) in cur.iter().enumerate() {
        if c == p as u32 + 1 {
            loops += 1;
        } else {
            close.insert(c, p as u32 + 1);
        }
    }
    let xs = xs
        .into_iter()
        .map(|x: Crossing| Crossing::new(x.slots.map(|v| *close.get(&v).unwrap_or(&v)), x.positive))
        .collect();
    Diagram::new(xs, loops).unwrap()
}

/// Fraction-free elimination over Z[t, t^-1].
pub fn bareiss(mut m: Vec<Vec<Laurent>>) -> Laurent {
    let n = m.len();
    if n == 0 {
        return Laurent::one();
    }
    let mut sign = 1;
    let mut prev = Laurent::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Laurent::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.divide_exact(&prev).unwrap().expect("exact step");
            }
        }
        prev = m[k][k].clone();
    }
    if sign < 0 {
        -&m[n - 1][n - 1]
    } else {
        m[n - 1][n - 1].clone()
    }
}

/// Alexander polynomial of a knot diagram from the Fox-calculus matrix of its
/// Wirtinger presentation.
pub fn oracle_alexander(d: &Diagram) -> Laurent {
    assert_eq!(d.component_count(), 1);
    let xs = d.crossings();
    if xs.is_empty() {
        return Laurent::one();
    }
    // Wirtinger generators: arcs joined through over-passes
    let mut ids: HashMap<u32, usize> = HashMap::new();
    for x in xs {
        for a in x.slots {
            let k = ids.len();
            ids.entry(a).or_insert(k);
        }
    }
    let mut p: Vec<usize> = (0..ids.len()).collect();
    for x in xs {
        let (r1, r3) = (find(&mut p, ids[&x.slots[1]]), find(&mut p, ids[&x.slots[3]]));
        p[r1] = r3;
    }
    let mut gens: HashMap<usize, usize> = HashMap::new();
    for i in 0..ids.len() {
        let r = find(&mut p, i);
        let k = gens.len();
        gens.entry(r).or_insert(k);
    }
    let n = xs.len();
    assert_eq!(gens.len(), n);
    let mut g = |a: u32| gens[&find(&mut p, ids[&a])];
    let mut rows = vec![vec![Laurent::zero(); n]; n];
    for (r, x) in xs.iter().enumerate() {
        let (k, i, j) = (g(x.slots[1]), g(x.slots[0]), g(x.slots[2]));
        let entries: [(usize, Laurent); 3] = if x.positive {
            [(k, Laurent::from_terms([(0, 1), (1, -1)])), (i, Laurent::monomial(1, 1)), (j, Laurent::monomial(0, -1))]
        } else {
            [(k, Laurent::from_terms([(0, -1), (1, 1)])), (i, Laurent::monomial(0, 1)), (j, Laurent::monomial(1, -1))]
        };
        for (c, v) in entries {
            rows[r][c] = &rows[r][c] + &v;
        }
    }
    rows.pop();
    for row in rows.iter_mut() {
        row.pop();
    }
    bareiss(rows)
}

/// Shift to lowest exponent 0 and make the lowest coefficient positive.
pub fn normalize(p: &Laurent) -> Laurent {
    match p.min_exp() {
        None => Laurent::zero(),
        Some(e) => {
            let q = p.shift(-e);
            if q.coeff(0) < 0.into() {
                -&q
            } else {
                q
            }
        }
    }
}

/// Conway polynomial of a knot read as a polynomial in t via z^2 = t - 2 + t^-1.
pub fn conway_to_alexander(c: &ConwayPoly) -> Laurent {
    let z2 = Laurent::from_terms([(1, 1), (0, -2), (-1, 1)]);
    let mut out = Laurent::zero();
    for (e, k) in c.0.terms() {
        assert!(e % 2 == 0, "knot Conway polynomials are even");
        out = &out + &(&z2.pow((e / 2) as u32) * &Laurent::monomial(0, k.clone()));
    }
    out
}
