//! Exact sparse Laurent polynomials over the integers.
//!
//! [`Laurent`] is the shared engine: a map from integer exponent to nonzero
//! arbitrary-precision coefficient. The public polynomial types wrap it and
//! differ only in how an exponent is read:
//!
//! * [`HalfLaurent`] stores the numerator `k` of `t^(k/2)`, i.e. an element of
//!   `Z[t^(1/2), t^(-1/2)]` (Jones polynomials live here).
//! * [`BracketPoly`] stores raw exponents of `A` (Kauffman brackets).
//! * [`ConwayPoly`] stores exponents of `z` (never negative).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<i64, BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Laurent::zero();
        for (e, c) in terms {
            out.add_term(e, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub(crate) fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(self) -> Self {
        debug_assert!(self.terms.values().all(|c| !c.is_zero()), "stored zero coefficient");
        self
    }

    /// Multiplies by `x^by`.
    pub fn shift(&self, by: i64) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect(),
        }
    }

    /// Multiplies every exponent by `factor` (`factor` may be negative).
    pub fn scale_exponents(&self, factor: i64) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e * factor, c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Laurent::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division in the Laurent ring. Both operands are shifted by a unit
    /// monomial to ordinary polynomials with nonzero constant term, divided by
    /// long division, and the quotient is accepted only if every step stays
    /// integral and the remainder vanishes.
    pub fn divide_exact(&self, d: &Laurent) -> Result<Option<Laurent>> {
        let (Some(d_lo), Some(d_hi)) = (d.min_exp(), d.max_exp()) else {
            return Err(Error::domain("division by the zero polynomial"));
        };
        let (Some(n_lo), Some(_)) = (self.min_exp(), self.max_exp()) else {
            return Ok(Some(Laurent::zero()));
        };
        let dn = d.shift(-d_lo);
        let d_deg = d_hi - d_lo;
        let lead = dn.coeff(d_deg);
        let mut rem = self.shift(-n_lo);
        let mut quot = Laurent::zero();
        while let Some(r_hi) = rem.max_exp() {
            if r_hi < d_deg {
                return Ok(None);
            }
            let rc = rem.coeff(r_hi);
            if !(&rc % &lead).is_zero() {
                return Ok(None);
            }
            let qc = rc / &lead;
            let qe = r_hi - d_deg;
            for (e, c) in dn.terms() {
                rem.add_term(e + qe, -(c * &qc));
            }
            quot.add_term(qe, qc);
        }
        Ok(Some(quot.shift(n_lo - d_lo).check()))
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out.check()
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out.check()
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out.check()
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(Laurent);

/// Writes `terms` in increasing exponent order as `c var^e` joined by ` + `
/// or ` - `, with `fmt_exp` rendering each exponent.
fn write_terms(
    f: &mut fmt::Formatter<'_>,
    p: &Laurent,
    var: &str,
    fmt_exp: impl Fn(i64) -> Option<String>,
) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (e, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        match fmt_exp(e) {
            None => write!(f, "{mag}")?,
            Some(exp) => {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                write!(f, "{var}{exp}")?;
            }
        }
    }
    Ok(())
}

/// Splits `s` into signed term strings; a leading sign is optional.
fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let s: String = s
        .replace('\u{2212}', "-")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && prev != Some('^') {
            if cur.is_empty() {
                if prev.is_some() {
                    return Err(Error::parse(format!("dangling sign in {s:?}")));
                }
            } else {
                out.push((neg, std::mem::take(&mut cur)));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return Err(Error::parse(format!("empty term in {s:?}")));
    }
    out.push((neg, cur));
    Ok(out)
}

/// Parses a polynomial in `var`; `parse_exp` converts the text after `^` into
/// a stored exponent.
fn parse_terms(s: &str, var: char, parse_exp: impl Fn(&str) -> Result<i64>) -> Result<Laurent> {
    if s.trim() == "0" {
        return Ok(Laurent::zero());
    }
    let mut out = BTreeMap::new();
    for (neg, term) in split_terms(s)? {
        let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
        let (coeff_txt, exp) = match term.find(var) {
            None => (term.as_str(), 0),
            Some(pos) => {
                let rest = &term[pos + var.len_utf8()..];
                let exp = if rest.is_empty() {
                    parse_exp("1")?
                } else if let Some(e) = rest.strip_prefix('^') {
                    parse_exp(e)?
                } else {
                    return Err(Error::parse(format!("malformed term {term:?}")));
                };
                (term[..pos].trim_end_matches('*'), exp)
            }
        };
        let mut coeff: BigInt = if coeff_txt.is_empty() {
            BigInt::one()
        } else {
            coeff_txt
                .parse()
                .map_err(|_| Error::parse(format!("bad coefficient {coeff_txt:?} in {term:?}")))?
        };
        if coeff.is_negative() {
            return Err(Error::parse(format!("sign inside term {term:?}")));
        }
        if neg {
            coeff = -coeff;
        }
        if out.insert(exp, coeff).is_some() {
            return Err(Error::parse(format!("duplicate exponent in {s:?}")));
        }
    }
    Ok(Laurent::from_terms(out))
}

fn parse_int_exp(e: &str) -> Result<i64> {
    e.parse().map_err(|_| Error::parse(format!("bad exponent {e:?}")))
}

/// An element of `Z[t^(1/2), t^(-1/2)]`, stored by exponent numerator over 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HalfLaurent(pub Laurent);

impl HalfLaurent {
    pub fn zero() -> Self {
        HalfLaurent(Laurent::zero())
    }

    pub fn one() -> Self {
        HalfLaurent(Laurent::one())
    }

    /// `coeff * t^(numer/2)`.
    pub fn monomial(numer: i64, coeff: impl Into<BigInt>) -> Self {
        HalfLaurent(Laurent::monomial(numer, coeff))
    }

    /// Builds from `(numerator, coefficient)` pairs where each exponent is `numerator/2`.
    pub fn from_half_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        HalfLaurent(Laurent::from_terms(terms))
    }

    /// Builds from `(integer exponent, coefficient)` pairs.
    pub fn from_int_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        HalfLaurent(Laurent::from_terms(terms.into_iter().map(|(e, c)| (2 * e, c))))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn pow(&self, n: u32) -> Self {
        HalfLaurent(self.0.pow(n))
    }

    pub fn divide_exact(&self, d: &HalfLaurent) -> Result<Option<HalfLaurent>> {
        Ok(self.0.divide_exact(&d.0)?.map(HalfLaurent))
    }

    /// `t -> t^(-1)`.
    pub fn substitute_inverse(&self) -> HalfLaurent {
        HalfLaurent(self.0.scale_exponents(-1))
    }

    /// The loop value `-t^(1/2) - t^(-1/2)`, i.e. the Jones polynomial of the
    /// two-component unlink.
    pub fn loop_value() -> HalfLaurent {
        HalfLaurent::from_half_terms([(-1, -1), (1, -1)])
    }

    /// Evaluates at `t = 1`.
    pub fn at_one(&self) -> BigInt {
        self.0.terms().map(|(_, c)| c.clone()).sum()
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.0, "t", |e| match e {
            0 => None,
            2 => Some(String::new()),
            e if e % 2 == 0 => Some(format!("^{}", e / 2)),
            e => Some(format!("^{e}/2")),
        })
    }
}

impl FromStr for HalfLaurent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_terms(s, 't', |e| match e.split_once('/') {
            None => Ok(2 * parse_int_exp(e)?),
            Some((num, "2")) => {
                let n = parse_int_exp(num)?;
                if n % 2 == 0 {
                    Err(Error::parse(format!("exponent {e:?} not in lowest terms")))
                } else {
                    Ok(n)
                }
            }
            Some(_) => Err(Error::parse(format!("exponent {e:?} is not a half-integer"))),
        })
        .map(HalfLaurent)
    }
}

/// A Laurent polynomial in the bracket variable `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BracketPoly(pub Laurent);

impl BracketPoly {
    pub fn one() -> Self {
        BracketPoly(Laurent::one())
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        BracketPoly(Laurent::from_terms(terms))
    }

    /// The loop value `delta = -A^2 - A^(-2)`.
    pub fn delta() -> Self {
        BracketPoly::from_terms([(-2, -1), (2, -1)])
    }
}

impl fmt::Display for BracketPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.0, "A", |e| match e {
            0 => None,
            1 => Some(String::new()),
            e => Some(format!("^{e}")),
        })
    }
}

impl FromStr for BracketPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_terms(s, 'A', parse_int_exp).map(BracketPoly)
    }
}

/// Normalizes a bracket to the Jones polynomial: multiplies by `(-A)^(-3w)`
/// and substitutes `A = t^(-1/4)`.
pub fn bracket_to_jones(b: &BracketPoly, writhe: i64) -> Result<HalfLaurent> {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let normalized = b.0.shift(-3 * writhe);
    let mut out = Laurent::zero();
    for (e, c) in normalized.terms() {
        // A^e = t^(-e/4) = t^((-e/2)/2)
        if e % 2 != 0 {
            return Err(Error::Invariant(format!(
                "bracket exponent A^{e} does not map into Z[t^(1/2)] after writhe normalization"
            )));
        }
        out.add_term(-e / 2, c * sign);
    }
    Ok(HalfLaurent(out))
}

/// A polynomial in `z` with integer coefficients (Conway polynomials).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConwayPoly(pub Laurent);

impl ConwayPoly {
    pub fn zero() -> Self {
        ConwayPoly(Laurent::zero())
    }

    pub fn one() -> Self {
        ConwayPoly(Laurent::one())
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        ConwayPoly(Laurent::from_terms(terms))
    }

    /// Rewrites a Laurent polynomial in `x` that is a polynomial in
    /// `z = x - x^(-1)` into its `z` coefficients.
    pub fn from_x_laurent(p: &Laurent) -> Result<Self> {
        let z = Laurent::from_terms([(1, 1), (-1, -1)]);
        let mut rem = p.clone();
        let mut out = Laurent::zero();
        while let Some(hi) = rem.max_exp() {
            if hi < 0 || rem.min_exp() != Some(-hi) {
                return Err(Error::Invariant(format!(
                    "polynomial in x is not a polynomial in x - 1/x: {rem:?}"
                )));
            }
            let c = rem.coeff(hi);
            let zk = z.pow(hi as u32);
            rem = &rem - &(&zk * &Laurent::monomial(0, c.clone()));
            out.add_term(hi, c);
        }
        Ok(ConwayPoly(out))
    }
}

impl fmt::Display for ConwayPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // highest power first reads more naturally for Conway polynomials
        if self.0.is_zero() {
            return write!(f, "0");
        }
        let rev = Laurent::from_terms(self.0.terms().map(|(e, c)| (-e, c.clone())));
        write_terms(f, &rev, "z", |e| match -e {
            0 => None,
            1 => Some(String::new()),
            e => Some(format!("^{e}")),
        })
    }
}

impl FromStr for ConwayPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let p = parse_terms(s, 'z', parse_int_exp)?;
        if p.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::parse("negative power of z"));
        }
        Ok(ConwayPoly(p))
    }
}

macro_rules! wrapper_ops {
    ($t:ident) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                $t(&self.0 + &rhs.0)
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                $t(&self.0 - &rhs.0)
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                $t(&self.0 * &rhs.0)
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(-&self.0)
            }
        }
        owned_ops!($t);
    };
}

wrapper_ops!(HalfLaurent);
wrapper_ops!(BracketPoly);
wrapper_ops!(ConwayPoly);
