//! Multivariate polynomials over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Q;

/// Exponent vector of a monomial.
pub type Exps = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, Q>,
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All exponent vectors in `nvars` variables with total degree `< bound`,
/// ordered by degree, then lexicographically.
pub fn monomials_below(nvars: usize, bound: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    for d in 0..bound {
        let mut cur = vec![0u32; nvars];
        fill_degree(&mut out, &mut cur, 0, d);
    }
    out
}

fn fill_degree(out: &mut Vec<Exps>, cur: &mut Exps, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill_degree(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, Q::one())
    }

    pub fn monomial(exps: Exps, c: Q) -> Self {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `∏ (x_i − p_i)^{a_i}`.
    pub fn shifted_monomial(point: &[Q], exps: &[u32]) -> Self {
        let n = point.len();
        let mut acc = Poly::one(n);
        for (i, (&a, p)) in exps.iter().zip(point).enumerate() {
            let lin = &Poly::var(n, i) - &Poly::constant(n, p.clone());
            acc = &acc * &lin.pow(a);
        }
        acc
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent arity mismatch");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for (x, &k) in point.iter().zip(e) {
                    if k > 0 {
                        t *= &x.pow(k);
                    }
                }
                t
            })
            .sum()
    }

    /// Coefficients of `f` in the basis `(x − p)^a`, i.e. its Taylor expansion at `p`,
    /// keeping only total degree `< order`.
    pub fn taylor(&self, point: &[Q], order: u32) -> BTreeMap<Exps, Q> {
        let mut out: BTreeMap<Exps, Q> = BTreeMap::new();
        for (e, c) in &self.terms {
            // x^e = ∏ ((x-p)+p)^{e_i}; expand and keep low-order pieces.
            let mut partial: Vec<(Exps, Q)> = vec![(Vec::new(), c.clone())];
            for (i, &ei) in e.iter().enumerate() {
                let mut next = Vec::new();
                for (pre, coef) in &partial {
                    let used: u32 = pre.iter().sum();
                    for a in 0..=ei {
                        if used + a >= order {
                            break;
                        }
                        let b = binomial(ei as u64, a as u64);
                        let f = Q::from(BigIntFromU128(b)) * point[i].pow(ei - a);
                        let mut ex = pre.clone();
                        ex.push(a);
                        next.push((ex, coef * &f));
                    }
                }
                partial = next;
            }
            for (ex, coef) in partial {
                if coef.is_zero() {
                    continue;
                }
                let s = out.entry(ex).or_default();
                *s += coef;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Whether `f ∈ 𝔪_p^k`: all Taylor coefficients of order `< k` vanish.
    pub fn vanishes_to_order(&self, point: &[Q], k: u32) -> bool {
        self.taylor(point, k).is_empty()
    }

    /// Parses expressions such as `t^2 - t`, `3/2*x*y^2 + (x-1)^3`.
    ///
    /// Variable names: `x1..xn` always; additionally `t` or `x` when `n = 1`,
    /// and `x, y, z` when `n ≤ 3`.
    pub fn parse(s: &str, nvars: usize) -> Result<Poly, PolyParseError> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, nvars };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }

    /// Variable names used by [`Poly::parse`] and `Display`.
    pub fn var_name(nvars: usize, i: usize) -> String {
        match nvars {
            1 => "t".to_string(),
            2 | 3 => ["x", "y", "z"][i].to_string(),
            _ => format!("x{}", i + 1),
        }
    }
}

struct BigIntFromU128(u128);

impl From<BigIntFromU128> for Q {
    fn from(v: BigIntFromU128) -> Q {
        if v.0 <= i64::MAX as u128 {
            Q::from_int(v.0 as i64)
        } else {
            Q::from(num_bigint::BigInt::from(v.0))
        }
    }
}

/// Converts a `u128` count into a rational.
pub fn q_from_u128(n: u128) -> Q {
    Q::from(BigIntFromU128(n))
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Q::from_int(-1))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !abs.is_one() || is_const {
                factors.push(abs.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(Poly::var_name(self.nvars, i)),
                    _ => factors.push(format!("{}^{}", Poly::var_name(self.nvars, i), k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomials serialize as coefficient maps keyed by comma-joined exponent tuples.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let key: Vec<String> = e.iter().map(|k| k.to_string()).collect();
            m.serialize_entry(&key.join(","), c)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, Q> = BTreeMap::deserialize(deserializer)?;
        let mut nvars = None;
        let mut terms = Vec::new();
        for (k, c) in raw {
            let e: Result<Exps, _> = k.split(',').map(|s| s.trim().parse::<u32>()).collect();
            let e = e.map_err(serde::de::Error::custom)?;
            if *nvars.get_or_insert(e.len()) != e.len() {
                return Err(serde::de::Error::custom("inconsistent exponent arity"));
            }
            terms.push((e, c));
        }
        Ok(Poly::from_terms(nvars.unwrap_or(1), terms))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial at byte {pos}: {msg}")]
pub struct PolyParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyParseError {
        PolyParseError { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, PolyParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphabetic() => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly, PolyParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/') {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let q: Q = lit.parse().map_err(|_| self.err("bad number"))?;
                Ok(Poly::constant(self.nvars, q))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = self.resolve(name).ok_or_else(|| self.err(&format!("unknown variable {name}")))?;
                Ok(Poly::var(self.nvars, idx))
            }
            _ => Err(self.err("unexpected token")),
        }
    }

    fn resolve(&self, name: &str) -> Option<usize> {
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(i) = rest.parse::<usize>() {
                return (1..=self.nvars).contains(&i).then(|| i - 1);
            }
        }
        match (self.nvars, name) {
            (1, "t") | (1, "x") => Some(0),
            (2 | 3, "x") => Some(0),
            (2 | 3, "y") => Some(1),
            (3, "z") => Some(2),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(s: &str) -> Poly {
        Poly::parse(s, 1).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let f = p1("t^2 - t");
        assert_eq!(f.coeff(&[2]), Q::one());
        assert_eq!(f.coeff(&[1]), Q::from_int(-1));
        assert_eq!(f.to_string(), "t^2 - t");
        assert_eq!(p1("(t-1)^2"), p1("t^2 - 2t + 1"));
        assert_eq!(p1("3/2*t"), Poly::monomial(vec![1], Q::new(3, 2)));
        let g = Poly::parse("x*y - 2y^2 + 1", 2).unwrap();
        assert_eq!(g.coeff(&[0, 2]), Q::from_int(-2));
        assert!(Poly::parse("w + 1", 1).is_err());
        assert!(Poly::parse("t +", 1).is_err());
    }

    #[test]
    fn taylor_and_vanishing() {
        // t^2 (3 - 2t) vanishes to order 2 at 0 and (t-1)^2(2t+1) at 1.
        let f = p1("t^2*(3-2t)");
        let g = p1("(t-1)^2*(2t+1)");
        assert!(f.vanishes_to_order(&[Q::zero()], 2));
        assert!(!f.vanishes_to_order(&[Q::zero()], 3));
        assert!(g.vanishes_to_order(&[Q::one()], 2));
        assert_eq!(&f + &g, Poly::one(1));
        let h = Poly::parse("x^2*y + y", 2).unwrap();
        let t = h.taylor(&[Q::one(), Q::from_int(2)], 2);
        // h(1,2) = 4, ∂x = 2xy = 4, ∂y = x^2 + 1 = 2
        assert_eq!(t[&vec![0, 0]], Q::from_int(4));
        assert_eq!(t[&vec![1, 0]], Q::from_int(4));
        assert_eq!(t[&vec![0, 1]], Q::from_int(2));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_below(2, 2).len(), 3);
        assert_eq!(monomials_below(1, 4).len(), 4);
        assert_eq!(monomials_below(3, 3).len(), binomial(5, 3) as usize);
    }

    #[test]
    fn serde_roundtrip() {
        let g = Poly::parse("x*y - 2/3y^2 + 1", 2).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"0,0":"1","0,2":"-2/3","1,1":"1"}"#);
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
