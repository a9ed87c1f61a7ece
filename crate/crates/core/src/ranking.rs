//! Ranking functions as selective dioids.
//!
//! A [`Dioid`] supplies `combine` (the product, used to aggregate the weights
//! of the tuples in an answer), `prefer` (the selective sum, picking the
//! better of two weights), and the two neutral elements. The order induced by
//! `prefer` is total: `a ⪯ b` iff `prefer(a, b) == a`.

use std::cmp::Ordering;
use std::fmt::{self, Debug};

use thiserror::Error;

/// Which monotonicity property a ranking function guarantees.
///
/// Every selective dioid is subset-monotone. Strong subset-monotonicity
/// additionally lets an enumerator reuse the order of suffixes across
/// different prefixes, which PART+ relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    SubsetMonotone,
    StrongSubsetMonotone,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("invalid weight {text:?} for {dioid} ranking: {reason}")]
pub struct WeightParseError {
    pub text: String,
    pub dioid: &'static str,
    pub reason: String,
}

impl WeightParseError {
    fn new(text: &str, dioid: &'static str, reason: impl Into<String>) -> Self {
        WeightParseError {
            text: text.to_string(),
            dioid,
            reason: reason.into(),
        }
    }
}

pub trait Dioid: Clone + Debug + Send + Sync + 'static {
    type Weight: Clone + PartialEq + Debug + Send + Sync + 'static;

    fn name(&self) -> &'static str;
    fn zero(&self) -> Self::Weight;
    fn one(&self) -> Self::Weight;
    fn combine(&self, a: &Self::Weight, b: &Self::Weight) -> Self::Weight;
    fn prefer(&self, a: &Self::Weight, b: &Self::Weight) -> Self::Weight;
    fn monotonicity(&self) -> Monotonicity;

    /// Whether `combine` has an inverse. None of the enumerators require it.
    fn has_inverse(&self) -> bool {
        false
    }

    /// Total order induced by `prefer`; `Less` means "ranked earlier".
    fn compare(&self, a: &Self::Weight, b: &Self::Weight) -> Ordering {
        if a == b {
            Ordering::Equal
        } else if self.prefer(a, b) == *a {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Equality up to the rounding of `combine`. Two evaluation orders of
    /// the same answer may differ in the last bits of a real weight.
    fn same_weight(&self, a: &Self::Weight, b: &Self::Weight) -> bool {
        a == b
    }

    fn is_zero(&self, w: &Self::Weight) -> bool {
        *w == self.zero()
    }

    fn parse_weight(&self, text: &str) -> Result<Self::Weight, WeightParseError>;

    /// Plain-text rendering, used for CSV output and error messages.
    fn format_weight(&self, w: &Self::Weight) -> String;

    /// JSON rendering. Infinite weights become the string `"inf"`.
    fn weight_json(&self, w: &Self::Weight) -> String;

    fn combine_all<'a, I>(&self, ws: I) -> Self::Weight
    where
        I: IntoIterator<Item = &'a Self::Weight>,
    {
        ws.into_iter()
            .fold(self.one(), |acc, w| self.combine(&acc, w))
    }
}

fn parse_real(text: &str, dioid: &'static str) -> Result<f64, WeightParseError> {
    let t = text.trim();
    match t {
        "inf" | "+inf" | "Infinity" => return Ok(f64::INFINITY),
        "-inf" | "-Infinity" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let v: f64 = t
        .parse()
        .map_err(|_| WeightParseError::new(text, dioid, "not a number"))?;
    if v.is_nan() {
        return Err(WeightParseError::new(text, dioid, "NaN is not a weight"));
    }
    Ok(v)
}

fn format_real(w: f64) -> String {
    if w == f64::INFINITY {
        "inf".to_string()
    } else if w == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if w == 0.0 {
        "0".to_string()
    } else {
        format!("{w}")
    }
}

fn real_json(w: f64) -> String {
    if w.is_infinite() {
        format!("\"{}\"", format_real(w))
    } else {
        format_real(w)
    }
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn cmp_real(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).expect("weights are never NaN")
}

/// Sum of weights, smaller is better: `(ℝ ∪ {∞}, min, +, ∞, 0)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tropical;

impl Dioid for Tropical {
    type Weight = f64;

    fn name(&self) -> &'static str {
        "sum"
    }
    fn zero(&self) -> f64 {
        f64::INFINITY
    }
    fn one(&self) -> f64 {
        0.0
    }
    fn combine(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn prefer(&self, a: &f64, b: &f64) -> f64 {
        if a <= b {
            *a
        } else {
            *b
        }
    }
    fn same_weight(&self, a: &f64, b: &f64) -> bool {
        close(*a, *b)
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::StrongSubsetMonotone
    }
    fn has_inverse(&self) -> bool {
        true
    }
    fn compare(&self, a: &f64, b: &f64) -> Ordering {
        cmp_real(*a, *b)
    }
    fn parse_weight(&self, text: &str) -> Result<f64, WeightParseError> {
        let v = parse_real(text, self.name())?;
        if v == f64::NEG_INFINITY {
            return Err(WeightParseError::new(text, self.name(), "-inf is not in the domain"));
        }
        Ok(v)
    }
    fn format_weight(&self, w: &f64) -> String {
        format_real(*w)
    }
    fn weight_json(&self, w: &f64) -> String {
        real_json(*w)
    }
}

/// Bottleneck ranking, the largest tuple weight decides: `(ℝ ∪ {±∞}, min, max, ∞, -∞)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinMax;

impl Dioid for MinMax {
    type Weight = f64;

    fn name(&self) -> &'static str {
        "max"
    }
    fn zero(&self) -> f64 {
        f64::INFINITY
    }
    fn one(&self) -> f64 {
        f64::NEG_INFINITY
    }
    fn combine(&self, a: &f64, b: &f64) -> f64 {
        a.max(*b)
    }
    fn prefer(&self, a: &f64, b: &f64) -> f64 {
        if a <= b {
            *a
        } else {
            *b
        }
    }
    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::StrongSubsetMonotone
    }
    fn compare(&self, a: &f64, b: &f64) -> Ordering {
        cmp_real(*a, *b)
    }
    fn parse_weight(&self, text: &str) -> Result<f64, WeightParseError> {
        parse_real(text, self.name())
    }
    fn format_weight(&self, w: &f64) -> String {
        format_real(*w)
    }
    fn weight_json(&self, w: &f64) -> String {
        real_json(*w)
    }
}

/// Weight vector compared lexicographically, combined componentwise by `+`.
///
/// Missing trailing components count as zero, so vectors are kept without
/// trailing zeros and the empty vector is the neutral element.
#[derive(Debug, Clone, PartialEq)]
pub enum LexWeight {
    Vector(Vec<f64>),
    Infinite,
}

impl LexWeight {
    pub fn new(mut components: Vec<f64>) -> Self {
        while components.last() == Some(&0.0) {
            components.pop();
        }
        LexWeight::Vector(components)
    }

    pub fn components(&self) -> Option<&[f64]> {
        match self {
            LexWeight::Vector(v) => Some(v),
            LexWeight::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Lexicographic;

impl Dioid for Lexicographic {
    type Weight = LexWeight;

    fn name(&self) -> &'static str {
        "lex"
    }
    fn zero(&self) -> LexWeight {
        LexWeight::Infinite
    }
    fn one(&self) -> LexWeight {
        LexWeight::Vector(Vec::new())
    }
    fn combine(&self, a: &LexWeight, b: &LexWeight) -> LexWeight {
        match (a, b) {
            (LexWeight::Vector(x), LexWeight::Vector(y)) => {
                let n = x.len().max(y.len());
                let v = (0..n)
                    .map(|i| x.get(i).unwrap_or(&0.0) + y.get(i).unwrap_or(&0.0))
                    .collect();
                LexWeight::new(v)
            }
            _ => LexWeight::Infinite,
        }
    }
    fn prefer(&self, a: &LexWeight, b: &LexWeight) -> LexWeight {
        if self.compare(a, b) == Ordering::Greater {
            b.clone()
        } else {
            a.clone()
        }
    }
    fn same_weight(&self, a: &LexWeight, b: &LexWeight) -> bool {
        match (a.components(), b.components()) {
            (Some(x), Some(y)) => {
                (0..x.len().max(y.len())).all(|i| close(x.get(i).copied().unwrap_or(0.0), y.get(i).copied().unwrap_or(0.0)))
            }
            _ => a == b,
        }
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::StrongSubsetMonotone
    }
    fn has_inverse(&self) -> bool {
        true
    }
    fn compare(&self, a: &LexWeight, b: &LexWeight) -> Ordering {
        match (a, b) {
            (LexWeight::Infinite, LexWeight::Infinite) => Ordering::Equal,
            (LexWeight::Infinite, _) => Ordering::Greater,
            (_, LexWeight::Infinite) => Ordering::Less,
            (LexWeight::Vector(x), LexWeight::Vector(y)) => {
                let n = x.len().max(y.len());
                for i in 0..n {
                    let o = cmp_real(*x.get(i).unwrap_or(&0.0), *y.get(i).unwrap_or(&0.0));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
        }
    }
    fn parse_weight(&self, text: &str) -> Result<LexWeight, WeightParseError> {
        let t = text.trim();
        if t == "inf" {
            return Ok(LexWeight::Infinite);
        }
        let mut v = Vec::new();
        for part in t.split(';') {
            let c = parse_real(part, self.name())?;
            if c.is_infinite() {
                return Err(WeightParseError::new(text, self.name(), "components must be finite"));
            }
            v.push(c);
        }
        Ok(LexWeight::new(v))
    }
    fn format_weight(&self, w: &LexWeight) -> String {
        match w {
            LexWeight::Infinite => "inf".to_string(),
            LexWeight::Vector(v) => v.iter().map(|c| format_real(*c)).collect::<Vec<_>>().join(";"),
        }
    }
    fn weight_json(&self, w: &LexWeight) -> String {
        match w {
            LexWeight::Infinite => "\"inf\"".to_string(),
            LexWeight::Vector(v) => format!(
                "[{}]",
                v.iter().map(|c| format_real(*c)).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// Product of weights in `[0, 1]`, smaller is better, with `∞` as the
/// absorbing "no answer" element.
///
/// Multiplying by 0 collapses every continuation to the same weight, so this
/// ranking is only subset-monotone.
#[derive(Debug, Clone, Copy, Default)]
pub struct Product;

impl Dioid for Product {
    type Weight = f64;

    fn name(&self) -> &'static str {
        "prod"
    }
    fn zero(&self) -> f64 {
        f64::INFINITY
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn combine(&self, a: &f64, b: &f64) -> f64 {
        if a.is_infinite() || b.is_infinite() {
            f64::INFINITY
        } else {
            a * b
        }
    }
    fn prefer(&self, a: &f64, b: &f64) -> f64 {
        if a <= b {
            *a
        } else {
            *b
        }
    }
    fn same_weight(&self, a: &f64, b: &f64) -> bool {
        close(*a, *b)
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::SubsetMonotone
    }
    fn compare(&self, a: &f64, b: &f64) -> Ordering {
        cmp_real(*a, *b)
    }
    fn parse_weight(&self, text: &str) -> Result<f64, WeightParseError> {
        let v = parse_real(text, self.name())?;
        if v == f64::INFINITY || (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(WeightParseError::new(text, self.name(), "weights must lie in [0, 1]"))
        }
    }
    fn format_weight(&self, w: &f64) -> String {
        format_real(*w)
    }
    fn weight_json(&self, w: &f64) -> String {
        real_json(*w)
    }
}

/// Wraps a dioid and overrides the monotonicity class it claims.
///
/// Useful to probe what the law checker and the enumerators do with a
/// ranking function whose declaration is wrong.
#[derive(Debug, Clone, Copy)]
pub struct Declared<D> {
    pub inner: D,
    pub monotonicity: Monotonicity,
}

impl<D: Dioid> Dioid for Declared<D> {
    type Weight = D::Weight;

    fn name(&self) -> &'static str {
        self.inner.name()
    }
    fn zero(&self) -> D::Weight {
        self.inner.zero()
    }
    fn one(&self) -> D::Weight {
        self.inner.one()
    }
    fn combine(&self, a: &D::Weight, b: &D::Weight) -> D::Weight {
        self.inner.combine(a, b)
    }
    fn prefer(&self, a: &D::Weight, b: &D::Weight) -> D::Weight {
        self.inner.prefer(a, b)
    }
    fn same_weight(&self, a: &D::Weight, b: &D::Weight) -> bool {
        self.inner.same_weight(a, b)
    }
    fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }
    fn has_inverse(&self) -> bool {
        self.inner.has_inverse()
    }
    fn compare(&self, a: &D::Weight, b: &D::Weight) -> Ordering {
        self.inner.compare(a, b)
    }
    fn parse_weight(&self, text: &str) -> Result<D::Weight, WeightParseError> {
        self.inner.parse_weight(text)
    }
    fn format_weight(&self, w: &D::Weight) -> String {
        self.inner.format_weight(w)
    }
    fn weight_json(&self, w: &D::Weight) -> String {
        self.inner.weight_json(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    CombineAssociative,
    CombineCommutative,
    PreferAssociative,
    PreferCommutative,
    PreferIdempotent,
    Selective,
    Distributive,
    ZeroNeutral,
    ZeroAbsorbing,
    OneNeutral,
    OrderMonotone,
    StrongMonotone,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::CombineAssociative => "combine is associative",
            Law::CombineCommutative => "combine is commutative",
            Law::PreferAssociative => "prefer is associative",
            Law::PreferCommutative => "prefer is commutative",
            Law::PreferIdempotent => "prefer is idempotent",
            Law::Selective => "prefer is selective",
            Law::Distributive => "combine distributes over prefer",
            Law::ZeroNeutral => "zero is neutral for prefer",
            Law::ZeroAbsorbing => "zero absorbs under combine",
            Law::OneNeutral => "one is neutral for combine",
            Law::OrderMonotone => "combine is monotone in the order",
            Law::StrongMonotone => "combine is strongly monotone",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawViolation<W> {
    pub law: Law,
    pub witness: Vec<W>,
}

/// Checks the dioid axioms on every triple (and, for strong monotonicity,
/// every quadruple) drawn from `samples`. Returns one violation per broken
/// law, with the first counterexample found.
pub fn check_dioid_laws<D: Dioid>(d: &D, samples: &[D::Weight]) -> Vec<LawViolation<D::Weight>> {
    let mut out: Vec<LawViolation<D::Weight>> = Vec::new();
    let mut report = |law: Law, witness: &[&D::Weight]| {
        if !out.iter().any(|v| v.law == law) {
            out.push(LawViolation {
                law,
                witness: witness.iter().map(|w| (*w).clone()).collect(),
            });
        }
    };
    let le = |a: &D::Weight, b: &D::Weight| d.prefer(a, b) == *a;
    let zero = d.zero();
    let one = d.one();

    for a in samples {
        if d.prefer(a, a) != *a {
            report(Law::PreferIdempotent, &[a]);
        }
        if d.prefer(a, &zero) != *a || d.prefer(&zero, a) != *a {
            report(Law::ZeroNeutral, &[a]);
        }
        if !d.is_zero(&d.combine(a, &zero)) || !d.is_zero(&d.combine(&zero, a)) {
            report(Law::ZeroAbsorbing, &[a]);
        }
        if d.combine(a, &one) != *a || d.combine(&one, a) != *a {
            report(Law::OneNeutral, &[a]);
        }
        for b in samples {
            let p = d.prefer(a, b);
            if p != *a && p != *b {
                report(Law::Selective, &[a, b]);
            }
            if p != d.prefer(b, a) {
                report(Law::PreferCommutative, &[a, b]);
            }
            if d.combine(a, b) != d.combine(b, a) {
                report(Law::CombineCommutative, &[a, b]);
            }
            for c in samples {
                if d.combine(&d.combine(a, b), c) != d.combine(a, &d.combine(b, c)) {
                    report(Law::CombineAssociative, &[a, b, c]);
                }
                if d.prefer(&d.prefer(a, b), c) != d.prefer(a, &d.prefer(b, c)) {
                    report(Law::PreferAssociative, &[a, b, c]);
                }
                if d.combine(a, &d.prefer(b, c)) != d.prefer(&d.combine(a, b), &d.combine(a, c)) {
                    report(Law::Distributive, &[a, b, c]);
                }
                if le(a, b) && !le(&d.combine(a, c), &d.combine(b, c)) {
                    report(Law::OrderMonotone, &[a, b, c]);
                }
            }
        }
    }

    if d.monotonicity() == Monotonicity::StrongSubsetMonotone {
        for x1 in samples {
            for x2 in samples {
                if !le(x1, x2) {
                    continue;
                }
                for y1 in samples {
                    for y2 in samples {
                        if le(&d.combine(x1, y1), &d.combine(x1, y2))
                            && !le(&d.combine(x2, y1), &d.combine(x2, y2))
                        {
                            report(Law::StrongMonotone, &[x1, x2, y1, y2]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Ranking functions selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankingKind {
    Sum,
    Max,
    Lex,
    Prod,
}

impl std::str::FromStr for RankingKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sum" => Ok(RankingKind::Sum),
            "max" => Ok(RankingKind::Max),
            "lex" => Ok(RankingKind::Lex),
            "prod" => Ok(RankingKind::Prod),
            other => Err(format!("unknown ranking {other:?} (expected sum, max, lex or prod)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tropical_basics() {
        let d = Tropical;
        assert_eq!(d.combine(&3.0, &4.0), 7.0);
        assert_eq!(d.prefer(&3.0, &4.0), 3.0);
        assert_eq!(d.combine(&5.0, &d.zero()), f64::INFINITY);
        assert_eq!(d.weight_json(&f64::INFINITY), "\"inf\"");
        assert_eq!(d.weight_json(&111.0), "111");
        assert_eq!(d.parse_weight("inf").unwrap(), f64::INFINITY);
        assert!(d.parse_weight("nan").is_err());
    }

    #[test]
    fn lex_prefers_first_component() {
        let d = Lexicographic;
        let a = d.parse_weight("1;9").unwrap();
        let b = d.parse_weight("2;0").unwrap();
        assert_eq!(d.prefer(&a, &b), a);
        assert_eq!(d.weight_json(&a), "[1,9]");
        assert_eq!(d.combine(&a, &b), LexWeight::new(vec![3.0, 9.0]));
        assert_eq!(d.parse_weight("2;0").unwrap(), LexWeight::new(vec![2.0]));
    }

    #[test]
    fn product_zero_is_absorbing() {
        let d = Product;
        assert_eq!(d.combine(&0.0, &d.zero()), d.zero());
        assert_eq!(d.combine(&0.5, &0.5), 0.25);
        assert!(d.parse_weight("1.5").is_err());
    }

    #[test]
    fn minmax_one_is_neutral() {
        let d = MinMax;
        assert_eq!(d.combine(&d.one(), &-3.0), -3.0);
        assert_eq!(d.combine(&2.0, &7.0), 7.0);
    }
}
