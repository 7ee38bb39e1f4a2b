//! Weighted projective lines over the rationals and their tilting theory.
//!
//! A weighted line is the projective line with finitely many special points
//! carrying weights. Sheaves are modelled by chain sheaves: twists of the
//! structure sheaf modified along the local chains at the special points.
//! Hom spaces between chain sheaves are spaces of rational functions cut out
//! by a divisor bound, which makes every computation here exact.
//!
//! The second half of the module covers the two algebra-side outputs: the
//! endomorphism algebra of the canonical tilting bundle, matched against a
//! canonical algebra presentation, and the hereditary local orders attached
//! to compositions of the rank.

use crate::algebra::{
    algebra_from_quiver, Algebra, AlgebraError, Arrow, QuiverAlgebra, QuiverPresentation,
};
use crate::exactla::{scalar, Mat, Scalar};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HcurveError {
    #[error("invalid curve data: {0}")]
    InvalidCurve(String),
    #[error("the sheaves live on different curves")]
    CurveMismatch,
    #[error("chain indices are incompatible: {0}")]
    ChainMismatch(String),
    #[error("composite section violates its divisor bound")]
    DivisorViolation,
    #[error("point is not a special point of the curve")]
    PointNotSpecial,
    #[error("empty composition")]
    EmptyComposition,
    #[error("tilting obstruction: ext^1 between summands {0} and {1} has dimension {2}")]
    TiltingObstruction(String, String, usize),
    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),
    #[error("parameter list must consist of distinct nonzero scalars")]
    RepeatedLambda,
    #[error("algebra is not of canonical shape: {0}")]
    NotCanonicalShape(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

type Result<T> = std::result::Result<T, HcurveError>;

/// Polynomial in one variable over the rationals, constant coefficient first,
/// with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![Scalar::one()])
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(vec![c])
    }

    /// The monic linear polynomial t - xi.
    pub fn t_minus(xi: &Scalar) -> Poly {
        Poly(vec![-xi.clone(), Scalar::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree of a nonzero polynomial; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.0.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Scalar::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.0.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Euclidean division: self = q * div + r with deg r < deg div.
    pub fn divrem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let d = div.0.len();
        if rem.len() < d {
            return (Poly::zero(), Poly(rem));
        }
        let lead = div.0.last().unwrap().clone();
        let mut quot = vec![Scalar::zero(); rem.len() - d + 1];
        for top in (d - 1..rem.len()).rev() {
            let c = rem[top].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            quot[top + 1 - d] = c.clone();
            for (i, b) in div.0.iter().enumerate() {
                let at = top + 1 - d + i;
                rem[at] = rem[at].clone() - c.clone() * b.clone();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    fn into_monic(self) -> Poly {
        match self.0.last() {
            None => self,
            Some(l) => {
                let inv = Scalar::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Multiplicity of xi as a root.
    pub fn root_multiplicity(&self, xi: &Scalar) -> usize {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let lin = Poly::t_minus(xi);
        let mut f = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = f.divrem(&lin);
            if !r.is_zero() {
                return m;
            }
            f = q;
            m += 1;
        }
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = acc * at.clone() + c.clone();
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if e == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// Rational function num/den in reduced form with monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> RationalFunction {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, r1) = num.divrem(&g);
        let (den, r2) = den.divrem(&g);
        debug_assert!(r1.is_zero() && r2.is_zero());
        let lead = den.leading().expect("nonzero denominator").clone();
        let inv = Scalar::one() / lead;
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv).into_monic(),
        }
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        RationalFunction::new(p, Poly::one())
    }

    pub fn zero() -> RationalFunction {
        RationalFunction::from_poly(Poly::zero())
    }

    pub fn one() -> RationalFunction {
        RationalFunction::from_poly(Poly::one())
    }

    pub fn constant(c: Scalar) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RationalFunction) -> RationalFunction {
        assert!(!other.is_zero(), "division by the zero function");
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, s: &Scalar) -> RationalFunction {
        if s.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Order of vanishing at a point of the projective line; poles count
    /// negatively. Only defined for nonzero functions.
    pub fn ord_at(&self, p: &P1Point) -> i64 {
        assert!(!self.is_zero(), "order of the zero function");
        match p {
            P1Point::Finite(xi) => {
                self.num.root_multiplicity(xi) as i64 - self.den.root_multiplicity(xi) as i64
            }
            P1Point::Infinity => {
                self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64
            }
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            return write!(f, "{}", self.num);
        }
        let num_simple = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        if num_simple {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Point of the projective line over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum P1Point {
    Finite(Scalar),
    Infinity,
}

impl P1Point {
    pub fn finite(n: i64) -> P1Point {
        P1Point::Finite(scalar(n))
    }
}

impl PartialOrd for P1Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for P1Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (P1Point::Finite(a), P1Point::Finite(b)) => a.cmp(b),
            (P1Point::Finite(_), P1Point::Infinity) => Ordering::Less,
            (P1Point::Infinity, P1Point::Finite(_)) => Ordering::Greater,
            (P1Point::Infinity, P1Point::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(xi) => write!(f, "{}", xi),
            P1Point::Infinity => write!(f, "inf"),
        }
    }
}

/// Divisor on the projective line: a finite formal sum of points with
/// integer coefficients, kept sorted with zero coefficients dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivisorOnP1 {
    entries: Vec<(P1Point, i64)>,
}

impl DivisorOnP1 {
    pub fn zero() -> DivisorOnP1 {
        DivisorOnP1 { entries: Vec::new() }
    }

    pub fn from_entries(raw: Vec<(P1Point, i64)>) -> DivisorOnP1 {
        let mut d = DivisorOnP1::zero();
        for (p, c) in raw {
            d.bump(&p, c);
        }
        d
    }

    pub fn point(p: P1Point) -> DivisorOnP1 {
        DivisorOnP1::from_entries(vec![(p, 1)])
    }

    pub fn bump(&mut self, p: &P1Point, by: i64) {
        if by == 0 {
            return;
        }
        match self.entries.binary_search_by(|(q, _)| q.cmp(p)) {
            Ok(i) => {
                self.entries[i].1 += by;
                if self.entries[i].1 == 0 {
                    self.entries.remove(i);
                }
            }
            Err(i) => self.entries.insert(i, (p.clone(), by)),
        }
    }

    pub fn add(&self, other: &DivisorOnP1) -> DivisorOnP1 {
        let mut out = self.clone();
        for (p, c) in &other.entries {
            out.bump(p, *c);
        }
        out
    }

    pub fn neg(&self) -> DivisorOnP1 {
        DivisorOnP1 {
            entries: self.entries.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &DivisorOnP1) -> DivisorOnP1 {
        self.add(&other.neg())
    }

    pub fn coeff(&self, p: &P1Point) -> i64 {
        self.entries
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    pub fn entries(&self) -> &[(P1Point, i64)] {
        &self.entries
    }

    pub fn is_effective(&self) -> bool {
        self.entries.iter().all(|(_, c)| *c >= 0)
    }
}

impl fmt::Display for DivisorOnP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.entries {
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if *c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "({})", p)?;
        }
        Ok(())
    }
}

/// A special point with its weight and a composition of the rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpecialPoint {
    pub xi: P1Point,
    pub weight: usize,
    pub composition: Vec<usize>,
}

/// The projective line with weighted special points. The rank and the
/// compositions feed the order-theoretic side; the divisor calculus only
/// sees the weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedP1 {
    points: Vec<SpecialPoint>,
    rank: usize,
    base: P1Point,
}

impl WeightedP1 {
    pub fn new(points: Vec<SpecialPoint>, rank: usize, base: P1Point) -> Result<WeightedP1> {
        if rank == 0 {
            return Err(HcurveError::InvalidCurve("rank must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.weight < 2 {
                return Err(HcurveError::InvalidCurve(format!(
                    "weight at {} must be at least 2",
                    p.xi
                )));
            }
            if p.composition.len() != p.weight {
                return Err(HcurveError::InvalidCurve(format!(
                    "composition at {} must have one part per chain step",
                    p.xi
                )));
            }
            if p.composition.iter().any(|&n| n == 0) {
                return Err(HcurveError::InvalidCurve(format!(
                    "composition at {} has a zero part",
                    p.xi
                )));
            }
            if p.composition.iter().sum::<usize>() != rank {
                return Err(HcurveError::InvalidCurve(format!(
                    "composition at {} does not sum to the rank",
                    p.xi
                )));
            }
            if p.xi == base {
                return Err(HcurveError::InvalidCurve(
                    "base point must avoid the special points".into(),
                ));
            }
            for q in &points[..i] {
                if q.xi == p.xi {
                    return Err(HcurveError::InvalidCurve(format!(
                        "special point {} repeats",
                        p.xi
                    )));
                }
            }
        }
        Ok(WeightedP1 { points, rank, base })
    }

    /// Convenience constructor: every point gets the same weight and the
    /// finest composition summing to the rank is not needed, so each part of
    /// the composition is taken from `composition`.
    pub fn with_uniform_weight(
        xis: Vec<P1Point>,
        weight: usize,
        rank: usize,
        composition: Vec<usize>,
        base: P1Point,
    ) -> Result<WeightedP1> {
        let points = xis
            .into_iter()
            .map(|xi| SpecialPoint {
                xi,
                weight,
                composition: composition.clone(),
            })
            .collect();
        WeightedP1::new(points, rank, base)
    }

    pub fn points(&self) -> &[SpecialPoint] {
        &self.points
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base(&self) -> &P1Point {
        &self.base
    }

    pub fn weight_at(&self, idx: usize) -> usize {
        self.points[idx].weight
    }

    pub fn point_index(&self, p: &P1Point) -> Result<usize> {
        self.points
            .iter()
            .position(|s| s.xi == *p)
            .ok_or(HcurveError::PointNotSpecial)
    }

    /// The unmodified structure sheaf.
    pub fn structure_sheaf(&self) -> ChainSheaf {
        ChainSheaf {
            curve: self.clone(),
            twist: DivisorOnP1::zero(),
            chain: vec![0; self.points.len()],
        }
    }

    pub fn twisted_sheaf(&self, twist: DivisorOnP1) -> ChainSheaf {
        ChainSheaf {
            curve: self.clone(),
            twist,
            chain: vec![0; self.points.len()],
        }
    }

    /// The i-th chain modification at the given special point, untwisted.
    pub fn chain_sheaf(&self, point_idx: usize, i: usize) -> Result<ChainSheaf> {
        if point_idx >= self.points.len() {
            return Err(HcurveError::PointNotSpecial);
        }
        let kappa = self.points[point_idx].weight;
        if i > kappa {
            return Err(HcurveError::ChainMismatch(format!(
                "chain index {} exceeds the weight {}",
                i, kappa
            )));
        }
        let mut chain = vec![0; self.points.len()];
        chain[point_idx] = i;
        Ok(ChainSheaf {
            curve: self.clone(),
            twist: DivisorOnP1::zero(),
            chain,
        })
    }
}

/// A twist of the structure sheaf modified along the chains at the special
/// points. Chain index 0 means unmodified; index kappa(x) is the full twist
/// down by x, so the chain indices live in 0..=kappa(x).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainSheaf {
    curve: WeightedP1,
    twist: DivisorOnP1,
    chain: Vec<usize>,
}

impl ChainSheaf {
    pub fn curve(&self) -> &WeightedP1 {
        &self.curve
    }

    pub fn twist(&self) -> &DivisorOnP1 {
        &self.twist
    }

    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn twist_by(&self, d: &DivisorOnP1) -> ChainSheaf {
        ChainSheaf {
            curve: self.curve.clone(),
            twist: self.twist.add(d),
            chain: self.chain.clone(),
        }
    }
}

/// Divisor bound for maps between chain sheaves. A rational function f is a
/// map src -> tgt exactly when div(f) + D >= 0 for the divisor D returned
/// here: the twists contribute their difference and each special point
/// contributes the floor of the chain-index gap divided by the weight.
pub fn hom_divisor(src: &ChainSheaf, tgt: &ChainSheaf) -> Result<DivisorOnP1> {
    if src.curve != tgt.curve {
        return Err(HcurveError::CurveMismatch);
    }
    let mut d = tgt.twist.sub(&src.twist);
    for (idx, p) in src.curve.points.iter().enumerate() {
        let gap = src.chain[idx] as i64 - tgt.chain[idx] as i64;
        let kappa = p.weight as i64;
        d.bump(&p.xi, gap.div_euclid(kappa));
    }
    Ok(d)
}

/// Dimensions of the hom and ext space between two chain sheaves.
pub fn hom_and_ext_dims(src: &ChainSheaf, tgt: &ChainSheaf) -> Result<(usize, usize)> {
    let deg = hom_divisor(src, tgt)?.degree();
    let h0 = (deg + 1).max(0) as usize;
    let h1 = (-deg - 1).max(0) as usize;
    Ok((h0, h1))
}

/// A hom space together with its chosen basis of rational functions.
pub struct HomSpaceP1 {
    pub source: ChainSheaf,
    pub target: ChainSheaf,
    pub divisor: DivisorOnP1,
    pub basis: Vec<RationalFunction>,
}

/// Basis for the rational functions with div(f) + D >= 0.
///
/// When D is effective the basis is the partial-fraction one: the constant 1,
/// then for each finite point of D in ascending order the pole powers
/// 1/(t - xi)^j for j = 1..D(x), then the polynomial part t^j for
/// j = 1..D(inf). Otherwise every basis vector shares the fixed factor
/// f0 = prod (t - xi)^(-D(x)) over the finite support, and the basis is
/// f0, f0*t, ..., f0*t^deg(D). Both layouts are deterministic.
pub fn hom_basis(src: &ChainSheaf, tgt: &ChainSheaf) -> Result<HomSpaceP1> {
    let divisor = hom_divisor(src, tgt)?;
    let deg = divisor.degree();
    let mut basis = Vec::new();
    if deg >= 0 {
        if divisor.is_effective() {
            basis.push(RationalFunction::one());
            for (p, c) in divisor.entries() {
                if let P1Point::Finite(xi) = p {
                    let lin = Poly::t_minus(xi);
                    for j in 1..=*c {
                        basis.push(RationalFunction::new(Poly::one(), lin.pow(j as usize)));
                    }
                }
            }
            for j in 1..=divisor.coeff(&P1Point::Infinity) {
                basis.push(RationalFunction::from_poly(Poly::new({
                    let mut v = vec![Scalar::zero(); j as usize + 1];
                    v[j as usize] = Scalar::one();
                    v
                })));
            }
        } else {
            let mut f0 = RationalFunction::one();
            for (p, c) in divisor.entries() {
                if let P1Point::Finite(xi) = p {
                    let lin = Poly::t_minus(xi);
                    if *c < 0 {
                        f0 = f0.mul(&RationalFunction::from_poly(lin.pow((-c) as usize)));
                    } else {
                        f0 = f0.mul(&RationalFunction::new(Poly::one(), lin.pow(*c as usize)));
                    }
                }
            }
            let t = RationalFunction::from_poly(Poly::new(vec![Scalar::zero(), Scalar::one()]));
            let mut cur = f0;
            for _ in 0..=deg {
                basis.push(cur.clone());
                cur = cur.mul(&t);
            }
        }
    }
    debug_assert_eq!(basis.len(), (deg + 1).max(0) as usize);
    debug_assert!(basis
        .iter()
        .all(|f| satisfies_divisor_bound(f, &divisor)));
    Ok(HomSpaceP1 {
        source: src.clone(),
        target: tgt.clone(),
        divisor,
        basis,
    })
}

/// div(f) + d >= 0, checked at the support of d, at every pole or zero of f
/// over the rationals, and at infinity. All denominators arising in the
/// calculus split into linear factors, which the final assertion guards.
fn satisfies_divisor_bound(f: &RationalFunction, d: &DivisorOnP1) -> bool {
    if f.is_zero() {
        return true;
    }
    let mut checked_den_degree = 0usize;
    let mut points: Vec<P1Point> = d.entries().iter().map(|(p, _)| p.clone()).collect();
    for root in crate::exactla::rational_roots(f.den().coeffs()) {
        let p = P1Point::Finite(root);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    if !points.contains(&P1Point::Infinity) {
        points.push(P1Point::Infinity);
    }
    for p in &points {
        if f.ord_at(p) + d.coeff(p) < 0 {
            return false;
        }
        if let P1Point::Finite(xi) = p {
            checked_den_degree += f.den().root_multiplicity(xi);
        }
    }
    assert_eq!(
        checked_den_degree,
        f.den().degree().unwrap_or(0),
        "denominator must split into rational linear factors"
    );
    true
}

/// Coordinates of f in the given list of rational functions, if it lies in
/// their span. Clears denominators and compares polynomial coefficients.
pub fn coords_in_function_basis(
    basis: &[RationalFunction],
    f: &RationalFunction,
) -> Option<Vec<Scalar>> {
    if f.is_zero() {
        return Some(vec![Scalar::zero(); basis.len()]);
    }
    let mut common = f.den().clone();
    for b in basis {
        let g = common.gcd(b.den());
        let (extra, r) = b.den().divrem(&g);
        debug_assert!(r.is_zero());
        common = common.mul(&extra);
    }
    let cleared: Vec<Poly> = basis
        .iter()
        .map(|b| {
            let (q, r) = common.divrem(b.den());
            debug_assert!(r.is_zero());
            b.num().mul(&q)
        })
        .collect();
    let (qf, rf) = common.divrem(f.den());
    debug_assert!(rf.is_zero());
    let target = f.num().mul(&qf);
    let ncols = basis.len();
    let nrows = cleared
        .iter()
        .chain(std::iter::once(&target))
        .filter_map(|p| p.degree())
        .max()
        .map_or(0, |d| d + 1);
    let mut sys = Mat::zero(nrows, ncols);
    for (j, p) in cleared.iter().enumerate() {
        for (i, c) in p.coeffs().iter().enumerate() {
            sys[(i, j)] = c.clone();
        }
    }
    let mut rhs = vec![Scalar::zero(); nrows];
    for (i, c) in target.coeffs().iter().enumerate() {
        rhs[i] = c.clone();
    }
    sys.solve(&rhs)
}

/// A map of chain sheaves: a rational function subject to the divisor bound
/// of its source and target.
#[derive(Clone)]
pub struct Section {
    pub source: ChainSheaf,
    pub target: ChainSheaf,
    pub f: RationalFunction,
}

impl Section {
    pub fn new(source: ChainSheaf, target: ChainSheaf, f: RationalFunction) -> Result<Section> {
        let d = hom_divisor(&source, &target)?;
        if !f.is_zero() && !satisfies_divisor_bound(&f, &d) {
            return Err(HcurveError::DivisorViolation);
        }
        Ok(Section { source, target, f })
    }
}

/// Composition g then f, defined when the target of g is the source of f.
/// Sections compose by multiplication; the floor bounds are superadditive,
/// so a violation here means corrupted inputs rather than bad geometry.
pub fn compose(f: &Section, g: &Section) -> Result<Section> {
    if f.source.curve != g.source.curve {
        return Err(HcurveError::CurveMismatch);
    }
    if g.target != f.source {
        return Err(HcurveError::ChainMismatch(
            "inner sheaves of the composition differ".into(),
        ));
    }
    Section::new(g.source.clone(), f.target.clone(), f.f.mul(&g.f))
}

/// The normalized chain inclusions at a special point together with their
/// composite, rebased at the base point.
///
/// Each step theta_{x,i} is the section 1 of the one-dimensional space
/// Hom(chain index i, chain index i-1). The final step composes with the
/// isomorphism from the base twist down to the full chain twist, so the
/// composite theta_x lives in Hom(O(-o), O) for every x and different points
/// can be compared there.
pub fn theta_maps(curve: &WeightedP1, point_idx: usize) -> Result<(Vec<Section>, Section)> {
    if point_idx >= curve.points.len() {
        return Err(HcurveError::PointNotSpecial);
    }
    let kappa = curve.weight_at(point_idx);
    let mut steps = Vec::with_capacity(kappa);
    for i in 1..=kappa {
        let src = curve.chain_sheaf(point_idx, i)?;
        let tgt = curve.chain_sheaf(point_idx, i - 1)?;
        steps.push(Section::new(src, tgt, RationalFunction::one())?);
    }
    let xi = curve.points[point_idx].xi.clone();
    let rebase = base_change_section(curve, &xi, curve.chain_sheaf(point_idx, kappa)?)?;
    // The rebased section lands at the deep end of the chain, so the steps
    // apply from the last one upwards.
    let mut composite = rebase;
    for step in steps.iter().rev() {
        composite = compose(step, &composite)?;
    }
    Ok((steps, composite))
}

/// The composite theta for an arbitrary point distinct from the base: an
/// element of Hom(O(-o), O) vanishing at the point. Special points go through
/// their chains; other points use the twist by the point directly.
pub fn theta_composite(curve: &WeightedP1, p: &P1Point) -> Result<Section> {
    if let Ok(idx) = curve.point_index(p) {
        return Ok(theta_maps(curve, idx)?.1);
    }
    if *p == curve.base {
        return Err(HcurveError::PointNotSpecial);
    }
    let src = curve.twisted_sheaf(DivisorOnP1::point(curve.base.clone()).neg());
    let through = curve.twisted_sheaf(DivisorOnP1::point(p.clone()).neg());
    let iso = base_iso_function(p, &curve.base);
    let step = Section::new(through.clone(), curve.structure_sheaf(), RationalFunction::one())?;
    compose(&step, &Section::new(src, through, iso)?)
}

/// Isomorphism O(-o) -> O(-x) as a rational function: (t - x)/(t - o), with
/// the factor at infinity dropped.
fn base_iso_function(x: &P1Point, o: &P1Point) -> RationalFunction {
    let num = match x {
        P1Point::Finite(xi) => Poly::t_minus(xi),
        P1Point::Infinity => Poly::one(),
    };
    let den = match o {
        P1Point::Finite(xi) => Poly::t_minus(xi),
        P1Point::Infinity => Poly::one(),
    };
    RationalFunction::new(num, den)
}

/// Section of Hom(O(-o), full chain at x) realizing the isomorphism
/// O(-o) = O(-x) followed by the identification of O(-x) with the last
/// chain sheaf.
fn base_change_section(
    curve: &WeightedP1,
    x: &P1Point,
    full_chain: ChainSheaf,
) -> Result<Section> {
    let src = curve.twisted_sheaf(DivisorOnP1::point(curve.base.clone()).neg());
    Section::new(src, full_chain, base_iso_function(x, &curve.base))
}

/// The canonical generating sheaves: the structure sheaf and every proper or
/// full chain modification.
pub fn generating_set(curve: &WeightedP1) -> Vec<(String, ChainSheaf)> {
    let mut out = vec![("L".to_string(), curve.structure_sheaf())];
    for (idx, p) in curve.points.iter().enumerate() {
        for i in 1..=p.weight {
            out.push((
                format!("L(x{},{})", idx + 1, i),
                curve.chain_sheaf(idx, i).expect("indices in range"),
            ));
        }
    }
    out
}

/// The canonical tilting sheaves: the structure sheaf, its twist down by the
/// base point, and the proper chain modifications.
pub fn tilting_set(curve: &WeightedP1) -> Vec<(String, ChainSheaf)> {
    let mut out = vec![
        ("L".to_string(), curve.structure_sheaf()),
        (
            "L(-o)".to_string(),
            curve.twisted_sheaf(DivisorOnP1::point(curve.base.clone()).neg()),
        ),
    ];
    for (idx, p) in curve.points.iter().enumerate() {
        for i in 1..p.weight {
            out.push((
                format!("L(x{},{})", idx + 1, i),
                curve.chain_sheaf(idx, i).expect("indices in range"),
            ));
        }
    }
    out
}

/// Endomorphism algebra of the direct sum of the given sheaves, with the
/// multiplication opposite to composition so that paths read left of the
/// arrow they follow. Basis elements are the chosen hom-basis functions of
/// each ordered pair; the identity sections come first within each pair.
///
/// Fails with a tilting obstruction if any ext space between summands is
/// nonzero, since the result is then not the full derived endomorphism ring.
pub fn endomorphism_algebra(
    objects: &[(String, ChainSheaf)],
) -> Result<(Algebra, Vec<usize>)> {
    let layout = PairLayout::build(objects)?;
    let dim = layout.dim();
    let q = objects.len();
    let mut labels = Vec::with_capacity(dim);
    let mut idempotents = Vec::new();
    for &(u, v, k) in &layout.flat {
        if u == v && k == 0 {
            idempotents.push(labels.len());
            labels.push(objects[u].0.clone());
        } else {
            labels.push(format!("{}->{}#{}", objects[u].0, objects[v].0, k));
        }
    }
    let mut table = vec![vec![Scalar::zero(); dim]; dim * dim];
    for (i, &(ui, vi, ki)) in layout.flat.iter().enumerate() {
        for (j, &(uj, vj, kj)) in layout.flat.iter().enumerate() {
            // product b_i * b_j is the path through j first, so it needs the
            // path j to end where path i starts.
            if vj != ui {
                continue;
            }
            let prod = layout.space(ui, vi).basis[ki].mul(&layout.space(uj, vj).basis[kj]);
            table[i * dim + j] = layout.coords(uj, vi, &prod)?;
        }
    }
    debug_assert_eq!(idempotents.len(), q);
    let mut unit = vec![Scalar::zero(); dim];
    for &i in &idempotents {
        unit[i] = Scalar::one();
    }
    let algebra = Algebra::from_structure_constants(labels, table, unit)?;
    Ok((algebra, idempotents))
}

/// Flattened basis layout of an endomorphism algebra: one basis element per
/// hom-basis function of each ordered vertex pair, cells in row-major order.
struct PairLayout {
    q: usize,
    spaces: Vec<HomSpaceP1>,
    flat: Vec<(usize, usize, usize)>,
    starts: Vec<usize>,
}

impl PairLayout {
    fn build(objects: &[(String, ChainSheaf)]) -> Result<PairLayout> {
        let q = objects.len();
        assert!(q > 0, "endomorphism algebra of an empty collection");
        let mut spaces = Vec::with_capacity(q * q);
        let mut flat = Vec::new();
        let mut starts = Vec::with_capacity(q * q);
        for u in 0..q {
            for v in 0..q {
                let space = hom_basis(&objects[v].1, &objects[u].1)?;
                let (_, ext) = hom_and_ext_dims(&objects[v].1, &objects[u].1)?;
                if ext > 0 {
                    return Err(HcurveError::TiltingObstruction(
                        objects[v].0.clone(),
                        objects[u].0.clone(),
                        ext,
                    ));
                }
                starts.push(flat.len());
                for k in 0..space.basis.len() {
                    flat.push((u, v, k));
                }
                spaces.push(space);
            }
        }
        Ok(PairLayout {
            q,
            spaces,
            flat,
            starts,
        })
    }

    fn dim(&self) -> usize {
        self.flat.len()
    }

    fn space(&self, u: usize, v: usize) -> &HomSpaceP1 {
        &self.spaces[u * self.q + v]
    }

    fn elem(&self, u: usize, v: usize, k: usize) -> usize {
        debug_assert!(k < self.space(u, v).basis.len());
        self.starts[u * self.q + v] + k
    }

    /// Coordinates of a section of the (u, v) cell in full algebra coords.
    fn coords(&self, u: usize, v: usize, f: &RationalFunction) -> Result<Vec<Scalar>> {
        let cell = coords_in_function_basis(&self.space(u, v).basis, f)
            .ok_or(HcurveError::DivisorViolation)?;
        let mut out = vec![Scalar::zero(); self.dim()];
        let base = self.starts[u * self.q + v];
        for (k, c) in cell.into_iter().enumerate() {
            out[base + k] = c;
        }
        Ok(out)
    }
}

/// Endomorphism algebra of the canonical tilting collection.
pub fn tilting_endomorphism_algebra(
    curve: &WeightedP1,
) -> Result<(Algebra, Vec<(String, ChainSheaf)>)> {
    let objects = tilting_set(curve);
    let (algebra, _) = endomorphism_algebra(&objects)?;
    Ok((algebra, objects))
}

/// A canonical algebra presentation: star-shaped arms from a source vertex
/// to a sink, one arm per weight, with the arm composites for the third and
/// later arms tied linearly to the first two.
pub struct CanonicalAlgebraPresentation {
    pub weights: Vec<usize>,
    pub lambdas: Vec<Scalar>,
    pub presentation: QuiverPresentation,
}

/// Builds the canonical algebra with the given weights and parameters.
///
/// Arm j has vertices s, m{j}_1, ..., m{j}_{k_j - 1}, t and arrows a{j}_i.
/// For j >= 3 the relation is arm_j = arm_1 + lambda_j * arm_2. Two weights
/// give a path algebra with no relations; the weights (1, 1) give the
/// algebra with two parallel arrows.
pub fn canonical_algebra(
    weights: &[usize],
    lambdas: &[Scalar],
) -> Result<(CanonicalAlgebraPresentation, QuiverAlgebra)> {
    let r = weights.len();
    if r < 2 {
        return Err(HcurveError::InvalidWeights(
            "at least two weights are required".into(),
        ));
    }
    if weights.iter().any(|&k| k == 0) {
        return Err(HcurveError::InvalidWeights("weights must be positive".into()));
    }
    if r > 2 && weights.iter().any(|&k| k < 2) {
        return Err(HcurveError::InvalidWeights(
            "with three or more arms every weight must be at least 2".into(),
        ));
    }
    if lambdas.len() != r.saturating_sub(2) {
        return Err(HcurveError::InvalidWeights(format!(
            "{} arms need {} parameters, got {}",
            r,
            r - 2,
            lambdas.len()
        )));
    }
    for (i, l) in lambdas.iter().enumerate() {
        if l.is_zero() || lambdas[..i].contains(l) {
            return Err(HcurveError::RepeatedLambda);
        }
    }
    let mut vertices = vec!["s".to_string()];
    let mut mids = Vec::with_capacity(r);
    for (j, &k) in weights.iter().enumerate() {
        let mut arm = Vec::with_capacity(k.saturating_sub(1));
        for i in 1..k {
            arm.push(vertices.len());
            vertices.push(format!("m{}_{}", j + 1, i));
        }
        mids.push(arm);
    }
    let sink = vertices.len();
    vertices.push("t".to_string());
    let mut arrows = Vec::new();
    let mut arm_words = Vec::with_capacity(r);
    for (j, &k) in weights.iter().enumerate() {
        let mut word = Vec::with_capacity(k);
        for i in 1..=k {
            let source = if i == 1 { 0 } else { mids[j][i - 2] };
            let target = if i == k { sink } else { mids[j][i - 1] };
            word.push(arrows.len());
            arrows.push(Arrow {
                label: format!("a{}_{}", j + 1, i),
                source,
                target,
            });
        }
        arm_words.push(word);
    }
    let relations = lambdas
        .iter()
        .enumerate()
        .map(|(idx, l)| {
            vec![
                (Scalar::one(), arm_words[idx + 2].clone()),
                (-Scalar::one(), arm_words[0].clone()),
                (-l.clone(), arm_words[1].clone()),
            ]
        })
        .collect();
    let presentation = QuiverPresentation {
        vertices,
        arrows,
        relations,
    };
    let cap = weights.iter().sum::<usize>().max(4) + 2;
    let qa = algebra_from_quiver(&presentation, cap)?;
    Ok((
        CanonicalAlgebraPresentation {
            weights: weights.to_vec(),
            lambdas: lambdas.to_vec(),
            presentation,
        },
        qa,
    ))
}

/// Result of matching a tilting endomorphism algebra against a canonical
/// presentation: the recognized weights and parameters plus the canonical
/// algebra they generate, which is verified to be isomorphic to the input.
pub struct CanonicalMatch {
    pub weights: Vec<usize>,
    pub lambdas: Vec<Scalar>,
    pub canonical: CanonicalAlgebraPresentation,
    pub algebra: QuiverAlgebra,
}

/// Matches the endomorphism algebra of the canonical tilting collection
/// against a canonical algebra.
///
/// The arms follow the special points in their input order. The composite
/// sections through the chains are expressed in the basis of the first two,
/// which fixes the normalization: the parameter of arm j is the second
/// coefficient over the first. With fewer than two special points the
/// missing arms have weight 1 and their arrow picks the first hom-basis
/// element independent of the composites already chosen. The identification
/// sends each path of the canonical algebra to the corresponding product of
/// sections, and the match only succeeds if that map is a bijective algebra
/// homomorphism, so a single corrupted structure constant is caught.
pub fn match_canonical(
    endt: &Algebra,
    objects: &[(String, ChainSheaf)],
) -> Result<CanonicalMatch> {
    if objects.len() < 2 {
        return Err(HcurveError::NotCanonicalShape(
            "the collection has fewer than two sheaves".into(),
        ));
    }
    let curve = objects[0].1.curve().clone();
    let base_twist = DivisorOnP1::point(curve.base().clone()).neg();
    if objects[0].1 != curve.structure_sheaf() || objects[1].1 != curve.twisted_sheaf(base_twist) {
        return Err(HcurveError::NotCanonicalShape(
            "the collection does not start with the structure sheaf and its base twist".into(),
        ));
    }
    let mut expected = tilting_set(&curve);
    expected[0].0 = objects[0].0.clone();
    expected[1].0 = objects[1].0.clone();
    if objects.len() != expected.len()
        || objects
            .iter()
            .zip(&expected)
            .any(|(got, want)| got.1 != want.1)
    {
        return Err(HcurveError::NotCanonicalShape(
            "the collection is not the tilting set of its curve".into(),
        ));
    }
    let layout = PairLayout::build(objects)?;
    if endt.dim() != layout.dim() {
        return Err(HcurveError::NotCanonicalShape(format!(
            "dimension {} does not match the tilting collection, expected {}",
            endt.dim(),
            layout.dim()
        )));
    }

    let s = curve.points().len();
    let (weights, arm_count) = match s {
        0 => (vec![1, 1], 2),
        1 => (vec![curve.weight_at(0), 1], 2),
        _ => (
            (0..s).map(|j| curve.weight_at(j)).collect::<Vec<_>>(),
            s,
        ),
    };

    let thetas: Vec<Section> = (0..s)
        .map(|j| theta_maps(&curve, j).map(|(_, c)| c))
        .collect::<Result<_>>()?;
    let mut lambdas = Vec::new();
    let mut first_arrow_scale = vec![Scalar::one(); arm_count];
    if s >= 3 {
        let pair = [thetas[0].f.clone(), thetas[1].f.clone()];
        for j in 2..s {
            let coeffs = coords_in_function_basis(&pair, &thetas[j].f).ok_or_else(|| {
                HcurveError::NotCanonicalShape(
                    "a chain composite escapes the span of the first two".into(),
                )
            })?;
            if coeffs[0].is_zero() {
                return Err(HcurveError::NotCanonicalShape(
                    "a chain composite is proportional to the second one".into(),
                ));
            }
            lambdas.push(coeffs[1].clone() / coeffs[0].clone());
            first_arrow_scale[j] = Scalar::one() / coeffs[0].clone();
        }
    }
    let (canonical, qa) = canonical_algebra(&weights, &lambdas)?;

    // Object index of each canonical vertex: source, middles in arm order,
    // then the sink, mirroring the layout of the tilting set.
    let vertex_count = canonical.presentation.vertices.len();
    let obj_of = |v: usize| -> usize {
        if v == 0 {
            0
        } else if v == vertex_count - 1 {
            1
        } else {
            1 + v
        }
    };

    // Coordinates of the image of each arrow under the identification.
    let mut arrow_images = Vec::with_capacity(canonical.presentation.arrows.len());
    let full_hom = layout.space(0, 1);
    let mut used_degenerate: Vec<RationalFunction> = Vec::new();
    for j in 0..arm_count {
        let k = weights[j];
        if j < s {
            for i in 1..=k {
                let arrow = &canonical.presentation.arrows[arrow_index(&weights, j, i)];
                let (u, v) = (obj_of(arrow.source), obj_of(arrow.target));
                if layout.space(u, v).basis.len() != 1 {
                    return Err(HcurveError::NotCanonicalShape(
                        "a chain step has hom dimension other than one".into(),
                    ));
                }
                let mut coords = vec![Scalar::zero(); layout.dim()];
                coords[layout.elem(u, v, 0)] = if i == 1 {
                    first_arrow_scale[j].clone()
                } else {
                    Scalar::one()
                };
                arrow_images.push(coords);
            }
        } else {
            // Degenerate arm: a single arrow filling the two-dimensional
            // hom space next to whatever the earlier arms span.
            debug_assert_eq!(k, 1);
            let pick = (0..full_hom.basis.len())
                .find(|&c| {
                    let mut span = used_degenerate.clone();
                    if j > 0 && s == 1 {
                        span.push(thetas[0].f.clone());
                    }
                    coords_in_function_basis(&span, &full_hom.basis[c]).is_none()
                })
                .ok_or_else(|| {
                    HcurveError::NotCanonicalShape(
                        "no independent section is left for a degenerate arm".into(),
                    )
                })?;
            used_degenerate.push(full_hom.basis[pick].clone());
            let mut coords = vec![Scalar::zero(); layout.dim()];
            coords[layout.elem(0, 1, pick)] = Scalar::one();
            arrow_images.push(coords);
        }
    }

    // Image of every basis path; products apply the earlier arrow first.
    let mut images = Vec::with_capacity(qa.algebra.dim());
    for word in &qa.basis_paths {
        let coords = match word {
            crate::algebra::PathWord::Trivial(v) => {
                let u = obj_of(*v);
                let mut c = vec![Scalar::zero(); layout.dim()];
                c[layout.elem(u, u, 0)] = Scalar::one();
                c
            }
            crate::algebra::PathWord::Arrows(word) => {
                let mut acc = arrow_images[word[0]].clone();
                for &a in &word[1..] {
                    acc = endt.mul_coords(&arrow_images[a], &acc);
                }
                acc
            }
        };
        images.push(coords);
    }
    if Mat::from_rows(images.clone()).rank() != layout.dim() {
        return Err(HcurveError::NotCanonicalShape(
            "the path images do not span the endomorphism algebra".into(),
        ));
    }
    for i in 0..images.len() {
        for j in 0..images.len() {
            let structural = qa.algebra.mul_coords(
                &qa.algebra.basis_coords(i),
                &qa.algebra.basis_coords(j),
            );
            let mut expected = vec![Scalar::zero(); layout.dim()];
            for (k, c) in structural.iter().enumerate() {
                if !c.is_zero() {
                    for (t, e) in expected.iter_mut().zip(&images[k]) {
                        *t += c.clone() * e.clone();
                    }
                }
            }
            let actual = endt.mul_coords(&images[i], &images[j]);
            if actual != expected {
                return Err(HcurveError::NotCanonicalShape(format!(
                    "products diverge at {} * {}",
                    qa.algebra.labels()[i],
                    qa.algebra.labels()[j]
                )));
            }
        }
    }

    Ok(CanonicalMatch {
        weights: canonical.weights.clone(),
        lambdas: canonical.lambdas.clone(),
        canonical,
        algebra: qa,
    })
}

/// Index of arrow a{j+1}_i in the canonical presentation's arrow list.
fn arrow_index(weights: &[usize], j: usize, i: usize) -> usize {
    weights[..j].iter().sum::<usize>() + (i - 1)
}

/// Hereditary order in block form inside n x n matrices over a local field:
/// entries below the block diagonal are unrestricted integers, entries in a
/// block column strictly to the right of their block row gain one power of
/// the maximal ideal. The composition lists the block sizes.
pub struct LocalHereditaryOrder {
    composition: Vec<usize>,
    n: usize,
}

/// Full rank lattice described by the minimal valuation of each coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    valuations: Vec<i64>,
}

impl Lattice {
    pub fn valuations(&self) -> &[i64] {
        &self.valuations
    }

    /// Containment of lattices: other sits inside self when every coordinate
    /// of other is at least as deep.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.valuations.len() == other.valuations.len()
            && self
                .valuations
                .iter()
                .zip(&other.valuations)
                .all(|(a, b)| b >= a)
    }

    /// Length of the quotient by a sublattice as a vector space over the
    /// residue field.
    pub fn quotient_dim(&self, sub: &Lattice) -> usize {
        assert!(self.contains_lattice(sub), "not a sublattice");
        self.valuations
            .iter()
            .zip(&sub.valuations)
            .map(|(a, b)| (b - a) as usize)
            .sum()
    }
}

/// Data of one subquotient of the lattice chain.
pub struct ChainSimple {
    pub dim: usize,
    pub proj_dim: usize,
}

pub fn local_order(composition: &[usize]) -> Result<LocalHereditaryOrder> {
    if composition.is_empty() {
        return Err(HcurveError::EmptyComposition);
    }
    if composition.iter().any(|&p| p == 0) {
        return Err(HcurveError::InvalidCurve(
            "composition parts must be positive".into(),
        ));
    }
    Ok(LocalHereditaryOrder {
        composition: composition.to_vec(),
        n: composition.iter().sum(),
    })
}

impl LocalHereditaryOrder {
    pub fn composition(&self) -> &[usize] {
        &self.composition
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.composition.len()
    }

    fn block_of(&self, idx: usize) -> usize {
        let mut acc = 0;
        for (b, &p) in self.composition.iter().enumerate() {
            acc += p;
            if idx < acc {
                return b;
            }
        }
        panic!("index out of range");
    }

    /// Minimal valuation of each matrix entry of the order.
    pub fn valuation_pattern(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|r| {
                (0..self.n)
                    .map(|c| i64::from(self.block_of(c) > self.block_of(r)))
                    .collect()
            })
            .collect()
    }

    /// Membership test for a matrix given by entry valuations.
    pub fn contains(&self, valuations: &[Vec<i64>]) -> bool {
        let pat = self.valuation_pattern();
        valuations.len() == self.n
            && valuations.iter().enumerate().all(|(r, row)| {
                row.len() == self.n && row.iter().zip(&pat[r]).all(|(v, p)| v >= p)
            })
    }

    /// The descending chain of lattices the order stabilizes, from the full
    /// lattice down to its shift by the uniformizer. The proper members are
    /// exactly the indecomposable projectives.
    pub fn lattice_chain(&self) -> Vec<Lattice> {
        let k = self.block_count();
        let mut chain = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let depth: usize = self.composition[..i].iter().sum();
            let valuations = (0..self.n).map(|r| i64::from(r < depth)).collect();
            chain.push(Lattice { valuations });
        }
        // Stability of every member: pattern[r][c] + v[c] >= v[r].
        let pat = self.valuation_pattern();
        for l in &chain {
            for r in 0..self.n {
                for c in 0..self.n {
                    debug_assert!(pat[r][c] + l.valuations[c] >= l.valuations[r]);
                }
            }
        }
        chain
    }

    /// The chain subquotients with their projective dimensions. Each sits in
    /// a short exact sequence between two chain lattices, so its dimension is
    /// at most 1; it is exactly 1 because a torsion module admits no
    /// splitting back into a lattice, witnessed by a strict chain step.
    pub fn chain_simples(&self) -> Vec<ChainSimple> {
        let chain = self.lattice_chain();
        chain
            .windows(2)
            .map(|w| {
                let strict = w[0]
                    .valuations
                    .iter()
                    .zip(&w[1].valuations)
                    .any(|(a, b)| b > a);
                ChainSimple {
                    dim: w[0].quotient_dim(&w[1]),
                    proj_dim: usize::from(strict),
                }
            })
            .collect()
    }

    pub fn global_dim(&self) -> usize {
        self.chain_simples()
            .iter()
            .map(|s| s.proj_dim)
            .max()
            .unwrap_or(0)
    }
}

/// Lexicographically least cyclic rotation of a composition; conjugation by
/// permutation matrices realizes every rotation, so this is a normal form
/// for the order up to isomorphism.
pub fn morita_canonical_form(composition: &[usize]) -> Result<Vec<usize>> {
    if composition.is_empty() {
        return Err(HcurveError::EmptyComposition);
    }
    let k = composition.len();
    let mut best: Vec<usize> = composition.to_vec();
    for shift in 1..k {
        let rot: Vec<usize> = (0..k).map(|i| composition[(i + shift) % k]).collect();
        if rot < best {
            best = rot;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::frac;
    use crate::homalg::{global_dim, Dim};

    fn q(n: i64) -> Scalar {
        scalar(n)
    }

    fn poly(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    /// Three double points at 0, 1, mu with base point at infinity.
    fn triple_curve(mu: i64) -> WeightedP1 {
        WeightedP1::with_uniform_weight(
            vec![P1Point::finite(0), P1Point::finite(1), P1Point::finite(mu)],
            2,
            2,
            vec![1, 1],
            P1Point::Infinity,
        )
        .unwrap()
    }

    #[test]
    fn polynomial_division_and_display() {
        let f = poly(&[-1, 0, 1]); // t^2 - 1
        let g = poly(&[-1, 1]); // t - 1
        let (quot, rem) = f.divrem(&g);
        assert!(rem.is_zero());
        assert_eq!(quot, poly(&[1, 1]));
        assert_eq!(f.gcd(&g), g);
        assert_eq!(poly(&[0, 0, 3]).root_multiplicity(&q(0)), 2);
        assert_eq!(format!("{}", poly(&[1, -2, 1])), "t^2 - 2*t + 1");
        assert_eq!(
            format!("{}", Poly::new(vec![frac(-3, 2), Scalar::one()])),
            "t - 3/2"
        );
        assert_eq!(format!("{}", Poly::zero()), "0");
    }

    #[test]
    fn rational_functions_reduce_and_have_orders() {
        let f = RationalFunction::new(poly(&[-1, 0, 1]), poly(&[-1, 1]));
        assert_eq!(f, RationalFunction::from_poly(poly(&[1, 1])));
        let g = RationalFunction::new(poly(&[0, 2]), poly(&[0, 0, 1]));
        // 2t / t^2 reduces to 2/t with a monic denominator.
        assert_eq!(format!("{}", g), "2/(t)");
        assert_eq!(g.ord_at(&P1Point::finite(0)), -1);
        assert_eq!(g.ord_at(&P1Point::Infinity), 1);
        assert_eq!(g.mul(&g.clone()).ord_at(&P1Point::finite(0)), -2);
        let h = f.sub(&f);
        assert!(h.is_zero());
    }

    #[test]
    fn coordinates_in_a_function_basis() {
        let pole = RationalFunction::new(Poly::one(), poly(&[-1, 1]));
        let basis = vec![RationalFunction::one(), pole];
        let f = RationalFunction::new(poly(&[3, 2]), poly(&[-1, 1]));
        assert_eq!(
            coords_in_function_basis(&basis, &f),
            Some(vec![q(2), q(5)])
        );
        let t = RationalFunction::from_poly(poly(&[0, 1]));
        assert_eq!(coords_in_function_basis(&basis, &t), None);
    }

    #[test]
    fn hom_divisors_follow_the_chain_floors() {
        let curve = triple_curve(3);
        let l = curve.structure_sheaf();
        let lo = curve.twisted_sheaf(DivisorOnP1::point(P1Point::Infinity).neg());
        let d = hom_divisor(&lo, &l).unwrap();
        assert_eq!(d, DivisorOnP1::point(P1Point::Infinity));
        assert_eq!(hom_and_ext_dims(&lo, &l).unwrap(), (2, 0));
        // Twisting down one chain step makes maps from the structure sheaf
        // impossible and maps into it unique.
        for i in 1..=2 {
            let li = curve.chain_sheaf(0, i).unwrap();
            assert_eq!(
                hom_divisor(&l, &li).unwrap(),
                DivisorOnP1::point(P1Point::finite(0)).neg()
            );
            assert_eq!(hom_and_ext_dims(&l, &li).unwrap(), (0, 0));
            // Proper chain steps map in uniquely; the full chain is the
            // honest twist down by the point, which maps in two ways.
            assert_eq!(hom_and_ext_dims(&li, &l).unwrap().0, i);
        }
        // Ext only shows up from degree -2 downwards.
        let double_down =
            curve.twisted_sheaf(DivisorOnP1::from_entries(vec![(P1Point::Infinity, -2)]));
        assert_eq!(hom_and_ext_dims(&l, &double_down).unwrap(), (0, 1));
        let l1 = curve.chain_sheaf(0, 1).unwrap();
        let l2 = curve.chain_sheaf(0, 2).unwrap();
        assert_eq!(hom_divisor(&l2, &l1).unwrap(), DivisorOnP1::zero());
        // The full chain agrees with the honest twist.
        let twisted = curve.twisted_sheaf(DivisorOnP1::point(P1Point::finite(0)).neg());
        assert_eq!(
            hom_divisor(&l2, &l).unwrap(),
            hom_divisor(&twisted, &l).unwrap()
        );
        // Sheaves on different curves do not talk to each other.
        let other = triple_curve(4).structure_sheaf();
        assert!(matches!(
            hom_divisor(&l, &other),
            Err(HcurveError::CurveMismatch)
        ));
    }

    #[test]
    fn hom_bases_use_the_two_layouts() {
        let curve = triple_curve(3);
        let l = curve.structure_sheaf();
        let lo = curve.twisted_sheaf(DivisorOnP1::point(P1Point::Infinity).neg());
        let space = hom_basis(&lo, &l).unwrap();
        let shown: Vec<String> = space.basis.iter().map(|f| format!("{}", f)).collect();
        assert_eq!(shown, vec!["1", "t"]);
        // Effective divisor supported at two finite points.
        let down = curve.twisted_sheaf(
            DivisorOnP1::from_entries(vec![
                (P1Point::finite(0), -1),
                (P1Point::finite(1), -1),
            ]),
        );
        let space = hom_basis(&down, &l).unwrap();
        let shown: Vec<String> = space.basis.iter().map(|f| format!("{}", f)).collect();
        assert_eq!(shown, vec!["1", "1/(t)", "1/(t - 1)"]);
        // Mixed signs: one pole allowed at infinity, one zero forced at 1.
        let l1 = curve.chain_sheaf(1, 1).unwrap();
        let space = hom_basis(&lo, &l1).unwrap();
        let shown: Vec<String> = space.basis.iter().map(|f| format!("{}", f)).collect();
        assert_eq!(shown, vec!["t - 1"]);
        // Negative degree: no maps.
        assert!(hom_basis(&l, &lo).unwrap().basis.is_empty());
    }

    #[test]
    fn frozen_hom_table_for_three_double_points() {
        let curve = triple_curve(2);
        let objects = tilting_set(&curve);
        assert_eq!(objects.len(), 5);
        let expected = [
            [1, 0, 0, 0, 0],
            [2, 1, 1, 1, 1],
            [1, 0, 1, 0, 0],
            [1, 0, 0, 1, 0],
            [1, 0, 0, 0, 1],
        ];
        let mut total = 0;
        for (si, (_, src)) in objects.iter().enumerate() {
            for (ti, (_, tgt)) in objects.iter().enumerate() {
                let (h0, h1) = hom_and_ext_dims(src, tgt).unwrap();
                assert_eq!(h0, expected[si][ti], "hom from {} to {}", si, ti);
                assert_eq!(h1, 0, "ext from {} to {}", si, ti);
                total += h0;
            }
        }
        assert_eq!(total, 13);
    }

    #[test]
    fn duality_defect_detects_isomorphic_pairs() {
        let curve = triple_curve(3);
        let objects = tilting_set(&curve);
        for (_, u) in &objects {
            for (_, v) in &objects {
                let there = hom_divisor(u, v).unwrap().degree();
                let back = hom_divisor(v, u).unwrap().degree();
                assert!(there + back <= 0);
                assert_eq!(there + back == 0, u.chain() == v.chain());
            }
        }
    }

    #[test]
    fn sections_compose_and_respect_their_bounds() {
        let curve = triple_curve(3);
        let l = curve.structure_sheaf();
        // t is not a global section of the structure sheaf.
        let t = RationalFunction::from_poly(poly(&[0, 1]));
        assert!(matches!(
            Section::new(l.clone(), l.clone(), t),
            Err(HcurveError::DivisorViolation)
        ));
        let (steps, _) = theta_maps(&curve, 0).unwrap();
        let through = compose(&steps[0], &steps[1]).unwrap();
        assert_eq!(through.f, RationalFunction::one());
        assert_eq!(through.source, curve.chain_sheaf(0, 2).unwrap());
        assert_eq!(through.target, l);
        // Steps of different points do not compose.
        let (other_steps, _) = theta_maps(&curve, 1).unwrap();
        assert!(matches!(
            compose(&steps[0], &other_steps[1]),
            Err(HcurveError::ChainMismatch(_))
        ));
    }

    #[test]
    fn theta_composites_vanish_at_their_points() {
        let curve = triple_curve(3);
        let xs = [q(0), q(1), q(3)];
        let mut composites = Vec::new();
        for (j, x) in xs.iter().enumerate() {
            let (steps, theta) = theta_maps(&curve, j).unwrap();
            assert_eq!(steps.len(), 2);
            assert_eq!(theta.f, RationalFunction::from_poly(Poly::t_minus(x)));
            assert_eq!(theta.f.ord_at(&P1Point::Finite(x.clone())), 1);
            composites.push(theta);
        }
        for j in 1..3 {
            let alone = [composites[0].f.clone()];
            assert!(coords_in_function_basis(&alone, &composites[j].f).is_none());
        }
        // A point off the special locus still has a composite section.
        let extra = theta_composite(&curve, &P1Point::finite(7)).unwrap();
        assert_eq!(extra.f, RationalFunction::from_poly(poly(&[-7, 1])));
        assert!(matches!(
            theta_composite(&curve, &P1Point::Infinity),
            Err(HcurveError::PointNotSpecial)
        ));
        // With a finite base point the isomorphism picks up a denominator.
        let shifted = WeightedP1::with_uniform_weight(
            vec![P1Point::Infinity],
            2,
            2,
            vec![1, 1],
            P1Point::finite(0),
        )
        .unwrap();
        let (_, theta) = theta_maps(&shifted, 0).unwrap();
        assert_eq!(
            theta.f,
            RationalFunction::new(Poly::one(), poly(&[0, 1]))
        );
    }

    #[test]
    fn tilting_and_generating_sets_by_weight() {
        let bare = WeightedP1::new(vec![], 1, P1Point::Infinity).unwrap();
        assert_eq!(tilting_set(&bare).len(), 2);
        assert_eq!(generating_set(&bare).len(), 1);
        let single = WeightedP1::with_uniform_weight(
            vec![P1Point::finite(0)],
            2,
            2,
            vec![1, 1],
            P1Point::Infinity,
        )
        .unwrap();
        assert_eq!(tilting_set(&single).len(), 3);
        assert_eq!(generating_set(&single).len(), 3);
        let triple = triple_curve(3);
        assert_eq!(tilting_set(&triple).len(), 5);
        assert_eq!(generating_set(&triple).len(), 7);
    }

    #[test]
    fn kronecker_appears_over_the_bare_line() {
        let bare = WeightedP1::new(vec![], 1, P1Point::Infinity).unwrap();
        let (endt, objects) = tilting_endomorphism_algebra(&bare).unwrap();
        assert_eq!(endt.dim(), 4);
        assert_eq!(endt.radical().len(), 2);
        let matched = match_canonical(&endt, &objects).unwrap();
        assert_eq!(matched.weights, vec![1, 1]);
        assert!(matched.lambdas.is_empty());
        assert_eq!(matched.algebra.algebra.dim(), 4);
    }

    #[test]
    fn single_double_point_gives_a_three_object_algebra() {
        let single = WeightedP1::with_uniform_weight(
            vec![P1Point::finite(0)],
            2,
            2,
            vec![1, 1],
            P1Point::Infinity,
        )
        .unwrap();
        let (endt, objects) = tilting_endomorphism_algebra(&single).unwrap();
        assert_eq!(endt.dim(), 7);
        let matched = match_canonical(&endt, &objects).unwrap();
        assert_eq!(matched.weights, vec![2, 1]);
        assert!(matched.lambdas.is_empty());
    }

    #[test]
    fn triple_point_algebra_matches_the_canonical_form() {
        let curve = triple_curve(3);
        let (endt, objects) = tilting_endomorphism_algebra(&curve).unwrap();
        assert_eq!(endt.dim(), 13);
        assert_eq!(endt.primitive_idempotents().unwrap().len(), 5);
        let matched = match_canonical(&endt, &objects).unwrap();
        assert_eq!(matched.weights, vec![2, 2, 2]);
        assert_eq!(matched.lambdas, vec![frac(-3, 2)]);
        assert_eq!(matched.algebra.algebra.dim(), 13);
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let curve = triple_curve(3);
        let (_, objects) = tilting_endomorphism_algebra(&curve).unwrap();
        // Right dimension, wrong parameter: the product check must notice.
        let (_, wrong) = canonical_algebra(&[2, 2, 2], &[q(1)]).unwrap();
        assert_eq!(wrong.algebra.dim(), 13);
        assert!(matches!(
            match_canonical(&wrong.algebra, &objects),
            Err(HcurveError::NotCanonicalShape(_))
        ));
        // Wrong dimension fails early.
        let kron = crate::presets::kronecker();
        assert!(matches!(
            match_canonical(&kron.algebra, &objects),
            Err(HcurveError::NotCanonicalShape(_))
        ));
    }

    #[test]
    fn canonical_algebra_families() {
        let (pres, qa) = canonical_algebra(&[1, 1], &[]).unwrap();
        assert_eq!(qa.algebra.dim(), 4);
        assert_eq!(pres.presentation.vertices, vec!["s", "t"]);
        let (_, qa) = canonical_algebra(&[2, 2], &[]).unwrap();
        assert_eq!(qa.algebra.dim(), 10);
        assert!(qa.presentation.relations.is_empty());
        let (pres, qa) = canonical_algebra(&[2, 2, 2], &[q(3)]).unwrap();
        assert_eq!(qa.algebra.dim(), 13);
        assert_eq!(pres.presentation.relations.len(), 1);
        assert_eq!(global_dim(&qa.algebra, 8).unwrap(), Dim::Finite(2));
        assert!(matches!(
            canonical_algebra(&[2], &[]),
            Err(HcurveError::InvalidWeights(_))
        ));
        assert!(matches!(
            canonical_algebra(&[2, 2, 1], &[q(1)]),
            Err(HcurveError::InvalidWeights(_))
        ));
        assert!(matches!(
            canonical_algebra(&[2, 2, 2], &[]),
            Err(HcurveError::InvalidWeights(_))
        ));
        assert!(matches!(
            canonical_algebra(&[2, 2, 2, 2], &[q(2), q(2)]),
            Err(HcurveError::RepeatedLambda)
        ));
        assert!(matches!(
            canonical_algebra(&[2, 2, 2], &[q(0)]),
            Err(HcurveError::RepeatedLambda)
        ));
    }

    #[test]
    fn local_orders_in_small_rank() {
        let full = local_order(&[3]).unwrap();
        assert_eq!(full.valuation_pattern(), vec![vec![0; 3]; 3]);
        let two = local_order(&[1, 1]).unwrap();
        assert_eq!(two.valuation_pattern(), vec![vec![0, 1], vec![0, 0]]);
        let mixed = local_order(&[2, 1]).unwrap();
        assert_eq!(
            mixed.valuation_pattern(),
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![0, 0, 0]]
        );
        assert!(mixed.contains(&[vec![0, 0, 1], vec![2, 0, 3], vec![0, 0, 0]]));
        assert!(!mixed.contains(&[vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]]));
        let chain = two.lattice_chain();
        assert_eq!(chain.len(), 3);
        assert_eq!(chain[0].valuations(), &[0, 0]);
        assert_eq!(chain[1].valuations(), &[1, 0]);
        assert_eq!(chain[2].valuations(), &[1, 1]);
        assert!(chain[0].contains_lattice(&chain[1]));
        assert_eq!(chain[0].quotient_dim(&chain[2]), 2);
        assert!(matches!(
            local_order(&[]),
            Err(HcurveError::EmptyComposition)
        ));
    }

    fn compositions(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for rest in compositions(n - first) {
                let mut c = vec![first];
                c.extend(rest);
                out.push(c);
            }
        }
        out
    }

    #[test]
    fn chain_simples_have_projective_dimension_one() {
        for n in 1..=4 {
            for comp in compositions(n) {
                let order = local_order(&comp).unwrap();
                let simples = order.chain_simples();
                assert_eq!(simples.len(), comp.len());
                for (s, &part) in simples.iter().zip(&comp) {
                    assert_eq!(s.dim, part);
                    assert_eq!(s.proj_dim, 1);
                }
                assert_eq!(order.global_dim(), 1);
            }
        }
    }

    #[test]
    fn rotation_normal_form_for_compositions() {
        assert_eq!(morita_canonical_form(&[1, 2, 1]).unwrap(), vec![1, 1, 2]);
        assert_eq!(morita_canonical_form(&[3]).unwrap(), vec![3]);
        let canon = morita_canonical_form(&[2, 1, 3]).unwrap();
        for shift in 0..3 {
            let rot: Vec<usize> = (0..3).map(|i| [2usize, 1, 3][(i + shift) % 3]).collect();
            assert_eq!(morita_canonical_form(&rot).unwrap(), canon);
        }
        assert_eq!(
            morita_canonical_form(&canon).unwrap(),
            canon,
            "normal form is idempotent"
        );
    }

    #[test]
    fn curve_validation_rejects_bad_data() {
        let p = |x: i64| SpecialPoint {
            xi: P1Point::finite(x),
            weight: 2,
            composition: vec![1, 1],
        };
        assert!(matches!(
            WeightedP1::new(vec![p(0), p(0)], 2, P1Point::Infinity),
            Err(HcurveError::InvalidCurve(_))
        ));
        assert!(matches!(
            WeightedP1::new(vec![p(0)], 2, P1Point::finite(0)),
            Err(HcurveError::InvalidCurve(_))
        ));
        let mut bad = p(1);
        bad.weight = 1;
        bad.composition = vec![2];
        assert!(matches!(
            WeightedP1::new(vec![bad], 2, P1Point::Infinity),
            Err(HcurveError::InvalidCurve(_))
        ));
        let mut off = p(1);
        off.composition = vec![1, 2];
        assert!(matches!(
            WeightedP1::new(vec![off], 2, P1Point::Infinity),
            Err(HcurveError::InvalidCurve(_))
        ));
        assert!(matches!(
            WeightedP1::new(vec![], 0, P1Point::Infinity),
            Err(HcurveError::InvalidCurve(_))
        ));
    }
}
