//! Exact linear algebra over the rationals.
//!
//! Everything downstream (structure constants, intertwiner solving, resolution
//! bookkeeping) reduces to row operations on dense matrices of arbitrary-precision
//! rationals. No floating point appears anywhere in this crate; ranks and kernels
//! are exact, so "is this map an isomorphism" is a decidable question, not a
//! tolerance judgement.
//!
//! Matrices act on column vectors. `rref` uses plain leftmost-pivot Gauss-Jordan
//! elimination, which makes the reduced form (and therefore every derived basis)
//! canonical for a given row span.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact field element. `BigRational` keeps gcd(num, den) = 1 and den > 0
/// canonically, so equality is structural.
pub type Scalar = BigRational;

/// Shorthand for an integer scalar.
pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction p/q. Panics on q = 0.
pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Dense row-major matrix over `Scalar`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut m = Mat::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Column vector from a coordinate list.
    pub fn col_vec(v: &[Scalar]) -> Mat {
        Mat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        let mut m = self.clone();
        for x in &mut m.data {
            *x *= s;
        }
        m
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        m
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        m
    }

    /// Matrix product; skips zero entries of `self`, which matters because most
    /// action matrices in this crate are sparse structure-constant tables.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(r, c)] += prod;
                    }
                }
            }
        }
        out
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        let mut out = vec![Scalar::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = &self[(r, c)];
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] += a * &v[c];
                }
            }
        }
        out
    }

    /// Stack rows of `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Append columns of `other` to the right of `self`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    /// Reduced row echelon form together with the pivot column indices.
    /// Leftmost-pivot, first-nonzero-row selection: the output is the canonical
    /// RREF of the row span, so two spanning sets of the same subspace reduce to
    /// identical matrices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for pc in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(sel) = (pr..m.rows).find(|&r| !m[(r, pc)].is_zero()) else {
                continue;
            };
            m.swap_rows(pr, sel);
            let inv = {
                let p = m[(pr, pc)].clone();
                p.recip()
            };
            for c in pc..m.cols {
                let v = m[(pr, c)].clone() * &inv;
                m[(pr, c)] = v;
            }
            for r in 0..m.rows {
                if r != pr && !m[(r, pc)].is_zero() {
                    let f = m[(r, pc)].clone();
                    for c in pc..m.cols {
                        let delta = &m[(pr, c)] * &f;
                        m[(r, c)] -= delta;
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, returned as the columns of a matrix.
    /// Each free column contributes the canonical back-substituted vector with
    /// that free coordinate set to 1.
    pub fn kernel_basis(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zero(self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out[(fc, j)] = Scalar::one();
            for (i, &pc) in pivots.iter().enumerate() {
                let v = -r[(i, fc)].clone();
                out[(pc, j)] = v;
            }
        }
        out
    }

    /// One exact solution of `self * x = b`, or None when inconsistent.
    /// Free variables are set to 0, so the answer is deterministic.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, b.len(), "rhs length mismatch");
        let aug = self.hstack(&Mat::col_vec(b));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Solve `self * X = B` column by column; None if any column is inconsistent.
    pub fn solve_mat(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows, "rhs row mismatch");
        let mut out = Mat::zero(self.cols, b.cols);
        for c in 0..b.cols {
            let x = self.solve(&b.col(c))?;
            for r in 0..self.cols {
                out[(r, c)] = x[r].clone();
            }
        }
        Some(out)
    }

    /// Inverse of a square matrix, or None if singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }
}

/// Canonical basis of the row span of `vectors` (each a coordinate vector of
/// the same length): the nonzero rows of the RREF. Feeding in any spanning set
/// of the same subspace yields the same list.
pub fn span_basis(vectors: &[Vec<Scalar>], ambient_dim: usize) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    assert!(vectors.iter().all(|v| v.len() == ambient_dim), "vector length mismatch");
    let (r, pivots) = Mat::from_rows(vectors.to_vec()).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Does `v` lie in the row span of `basis` (assumed RREF rows)? Returns the
/// coordinates in that basis if so.
pub fn coords_in_span(basis: &[Vec<Scalar>], pivots: &[usize], v: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut rem = v.to_vec();
    let mut coords = vec![Scalar::zero(); basis.len()];
    for (i, &p) in pivots.iter().enumerate() {
        if !rem[p].is_zero() {
            let c = rem[p].clone();
            for (x, b) in rem.iter_mut().zip(&basis[i]) {
                let delta = &c * b;
                *x -= delta;
            }
            coords[i] = c;
        }
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Incremental row-space accumulator: keeps its rows in RREF while vectors are
/// inserted one at a time. Used wherever a large spanning set is reduced to a
/// basis without materialising the full stacked matrix.
#[derive(Clone, Debug)]
pub struct SpanAccumulator {
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SpanAccumulator {
    pub fn new(ambient: usize) -> Self {
        SpanAccumulator { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Reduce `v` against the accumulated rows; if a nonzero remainder is left,
    /// normalise and insert it (keeping RREF). Returns true when the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut rem = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !rem[p].is_zero() {
                let c = rem[p].clone();
                for (x, b) in rem.iter_mut().zip(&self.rows[i]) {
                    let delta = &c * b;
                    *x -= delta;
                }
            }
        }
        let Some(lead) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = rem[lead].clone().recip();
        for x in &mut rem {
            *x *= &inv;
        }
        // Clear the new pivot column from existing rows, then insert sorted.
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if !row[lead].is_zero() {
                let c = row[lead].clone();
                for (x, b) in row.iter_mut().zip(&rem) {
                    let delta = &c * b;
                    *x -= delta;
                }
            }
        }
        let pos = self.pivots.iter().position(|&p| p > lead).unwrap_or(self.pivots.len());
        self.rows.insert(pos, rem);
        self.pivots.insert(pos, lead);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        coords_in_span(&self.rows, &self.pivots, v).is_some()
    }

    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        coords_in_span(&self.rows, &self.pivots, v)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn into_rows(self) -> Vec<Vec<Scalar>> {
        self.rows
    }
}

/// Rational-root shortcut: all rational roots of the monic polynomial with the
/// given coefficients (constant term first), found by clearing denominators and
/// testing divisor candidates. Used for splitting commutative semisimple tops.
pub fn rational_roots(coeffs: &[Scalar]) -> Vec<Scalar> {
    // Strip trailing zeros (should not occur for monic input) and factor out t^k.
    let mut poly: Vec<Scalar> = coeffs.to_vec();
    while poly.last().map_or(false, |c| c.is_zero()) {
        poly.pop();
    }
    if poly.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let mut low = 0usize;
    while low < poly.len() && poly[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Scalar::zero());
        poly.drain(..low);
    }
    if poly.len() <= 1 {
        roots.sort();
        return roots;
    }
    // Clear denominators to get integer coefficients.
    let mut denom_lcm = BigInt::one();
    for c in &poly {
        let d = c.denom();
        let g = num_integer::Integer::gcd(&denom_lcm, d);
        denom_lcm = &denom_lcm / g * d;
    }
    let ints: Vec<BigInt> =
        poly.iter().map(|c| c.numer() * (&denom_lcm / c.denom())).collect();
    let lead = ints.last().unwrap().clone();
    let konst = ints[0].clone();
    let mut candidates: Vec<Scalar> = Vec::new();
    for p in divisors(&konst) {
        for q in divisors(&lead) {
            for sign in [1i64, -1] {
                let cand = Scalar::new(&p * BigInt::from(sign), q.clone());
                if !candidates.contains(&cand) {
                    candidates.push(cand);
                }
            }
        }
    }
    let mut current = poly;
    for cand in candidates {
        // Deflate repeatedly while cand stays a root.
        while current.len() > 1 && eval_poly(&current, &cand).is_zero() {
            roots.push(cand.clone());
            current = deflate(&current, &cand);
        }
    }
    roots.sort();
    roots
}

fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn deflate(coeffs: &[Scalar], root: &Scalar) -> Vec<Scalar> {
    // Synthetic division by (t - root).
    let n = coeffs.len();
    let mut out = vec![Scalar::zero(); n - 1];
    let mut carry = Scalar::zero();
    for i in (0..n - 1).rev() {
        carry = coeffs[i + 1].clone() + carry * root;
        out[i] = carry.clone();
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    // Desk-scale constants only: trial division is fine.
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| scalar(x)).collect()).collect())
    }

    #[test]
    fn rref_of_rank_one_matrix() {
        let (r, pivots) = m(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(pivots, vec![0]);
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_is_idempotent() {
        let a = m(&[&[2, 4, 1], &[1, 2, 3], &[3, 6, 4]]);
        let (r1, p1) = a.rref();
        let (r2, p2) = r1.rref();
        assert_eq!(r1, r2);
        assert_eq!(p1, p2);
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let k = m(&[&[1, 2], &[2, 4]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        // Proportional to (-2, 1).
        assert_eq!(k.col(0), vec![scalar(-2), scalar(1)]);
        assert!(m(&[&[1, 2], &[2, 4]]).mul(&k).is_zero());
    }

    #[test]
    fn kernel_of_full_rank_is_empty() {
        let k = Mat::identity(3).kernel_basis();
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn kernel_of_single_row() {
        let k = m(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        // Spanned by a multiple of (1, -1).
        let v = k.col(0);
        assert!(v[0] == -v[1].clone());
    }

    #[test]
    fn solve_underdetermined_by_substitution() {
        let a = m(&[&[1, 1]]);
        let x = a.solve(&[scalar(3)]).unwrap();
        assert_eq!(a.apply(&x), vec![scalar(3)]);
    }

    #[test]
    fn solve_inconsistent_is_none() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert!(a.solve(&[scalar(0), scalar(1)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn span_basis_is_canonical() {
        let b1 = span_basis(&[vec![scalar(2), scalar(0)], vec![scalar(1), scalar(1)]], 2);
        let b2 = span_basis(
            &[vec![scalar(1), scalar(1)], vec![scalar(3), scalar(1)], vec![scalar(4), scalar(2)]],
            2,
        );
        assert_eq!(b1, b2);
    }

    #[test]
    fn accumulator_matches_batch_rref() {
        let vecs = vec![
            vec![scalar(1), scalar(2), scalar(3)],
            vec![scalar(2), scalar(4), scalar(6)],
            vec![scalar(0), scalar(1), scalar(1)],
        ];
        let mut acc = SpanAccumulator::new(3);
        for v in &vecs {
            acc.insert(v);
        }
        assert_eq!(acc.rows().to_vec(), span_basis(&vecs, 3));
    }

    #[test]
    fn rational_roots_of_split_polynomials() {
        // (t - 1)(t + 2) = t^2 + t - 2
        let r = rational_roots(&[scalar(-2), scalar(1), scalar(1)]);
        assert_eq!(r, vec![scalar(-2), scalar(1)]);
        // t^2 - t: roots 0, 1
        let r = rational_roots(&[scalar(0), scalar(-1), scalar(1)]);
        assert_eq!(r, vec![scalar(0), scalar(1)]);
        // (2t - 1)(t - 3) = 2t^2 - 7t + 3
        let r = rational_roots(&[scalar(3), scalar(-7), scalar(2)]);
        assert_eq!(r, vec![frac(1, 2), scalar(3)]);
        // t^2 + 1 has no rational roots
        assert!(rational_roots(&[scalar(1), scalar(0), scalar(1)]).is_empty());
    }

    #[test]
    fn rank_nullity_examples() {
        for (mat, rank) in [
            (m(&[&[1, 2, 3], &[4, 5, 6]]), 2),
            (m(&[&[0, 0], &[0, 0]]), 0),
            (Mat::identity(4), 4),
        ] {
            assert_eq!(mat.rank(), rank);
            assert_eq!(mat.rank() + mat.kernel_basis().cols(), mat.cols());
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_scalar() -> impl Strategy<Value = Scalar> {
            (-6i64..=6, 1i64..=3).prop_map(|(p, q)| frac(p, q))
        }

        fn small_mat() -> impl Strategy<Value = Mat> {
            (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
                proptest::collection::vec(
                    proptest::collection::vec(small_scalar(), c),
                    r,
                )
                .prop_map(Mat::from_rows)
            })
        }

        proptest! {
            #[test]
            fn solving_a_constructed_system_reproduces_the_image(
                a in small_mat(),
                xs in proptest::collection::vec(small_scalar(), 4),
            ) {
                let x: Vec<Scalar> = xs.into_iter().take(a.cols()).collect();
                prop_assume!(x.len() == a.cols());
                let b = a.apply(&x);
                let y = a.solve(&b).expect("a solution exists by construction");
                prop_assert_eq!(a.apply(&y), b);
            }

            #[test]
            fn rank_plus_nullity_is_the_column_count(a in small_mat()) {
                let kernel = a.kernel_basis();
                prop_assert_eq!(a.rank() + kernel.cols(), a.cols());
                prop_assert_eq!(a.rank(), a.transpose().rank());
                for j in 0..kernel.cols() {
                    let v = kernel.col(j);
                    prop_assert!(a.apply(&v).iter().all(|x| x.is_zero()));
                }
            }
        }
    }
}
