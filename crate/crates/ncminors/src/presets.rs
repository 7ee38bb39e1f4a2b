//! Named example algebras used across tests and the command-line fixtures.

use crate::algebra::{
    algebra_from_quiver, Algebra, Arrow, QuiverAlgebra, QuiverPresentation,
};
use crate::exactla::Scalar;
use num_traits::{One, Zero};

/// Three vertices 1 => 2 => 3 with two parallel arrows at each stage
/// (a1, a2: v1 -> v2 and b1, b2: v2 -> v3), bound by b1.a1 = 0 and b2.a2 = 0.
/// Nine-dimensional; its basis paths are the three vertices, four arrows, and
/// the two surviving compositions b2.a1 and b1.a2.
pub fn intro_fixture() -> QuiverAlgebra {
    let pres = QuiverPresentation {
        vertices: vec!["v1".into(), "v2".into(), "v3".into()],
        arrows: vec![
            Arrow { label: "a1".into(), source: 0, target: 1 },
            Arrow { label: "a2".into(), source: 0, target: 1 },
            Arrow { label: "b1".into(), source: 1, target: 2 },
            Arrow { label: "b2".into(), source: 1, target: 2 },
        ],
        relations: vec![
            vec![(Scalar::one(), vec![0, 2])], // b1.a1
            vec![(Scalar::one(), vec![1, 3])], // b2.a2
        ],
    };
    algebra_from_quiver(&pres, 8).expect("fixture is finite-dimensional")
}

/// Two vertices with two parallel arrows, no relations. Hereditary, dim 4.
pub fn kronecker() -> QuiverAlgebra {
    let pres = QuiverPresentation {
        vertices: vec!["v1".into(), "v2".into()],
        arrows: vec![
            Arrow { label: "a1".into(), source: 0, target: 1 },
            Arrow { label: "a2".into(), source: 0, target: 1 },
        ],
        relations: vec![],
    };
    algebra_from_quiver(&pres, 8).expect("path algebra of an acyclic quiver")
}

/// One vertex, one loop x with x^2 = 0. The dual numbers, dim 2.
pub fn dual_numbers() -> QuiverAlgebra {
    let pres = QuiverPresentation {
        vertices: vec!["v".into()],
        arrows: vec![Arrow { label: "x".into(), source: 0, target: 0 }],
        relations: vec![vec![(Scalar::one(), vec![0, 0])]],
    };
    algebra_from_quiver(&pres, 8).expect("loop modulo its square is finite")
}

/// Path algebra of 1 -> 2 (one arrow). Hereditary, dim 3.
pub fn a2_path() -> QuiverAlgebra {
    let pres = QuiverPresentation {
        vertices: vec!["v1".into(), "v2".into()],
        arrows: vec![Arrow { label: "a".into(), source: 0, target: 1 }],
        relations: vec![],
    };
    algebra_from_quiver(&pres, 8).expect("path algebra of an acyclic quiver")
}

/// The ground field as a one-dimensional algebra.
pub fn field() -> Algebra {
    Algebra::from_structure_constants(
        vec!["one".into()],
        vec![vec![Scalar::one()]],
        vec![Scalar::one()],
    )
    .expect("the field is an algebra")
}

/// Product of m copies of the field, basis of orthogonal idempotents.
pub fn semisimple_product(m: usize) -> Algebra {
    let mut table = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let mut v = vec![Scalar::zero(); m];
            if i == j {
                v[i] = Scalar::one();
            }
            table.push(v);
        }
    }
    let labels = (1..=m).map(|i| format!("e{i}")).collect();
    Algebra::from_structure_constants(labels, table, vec![Scalar::one(); m])
        .expect("product of fields is an algebra")
}

/// Full matrix algebra of size n, basis the matrix units in row-major order.
/// Semisimple but not basic for n >= 2.
pub fn matrix_algebra(n: usize) -> Algebra {
    let dim = n * n;
    let idx = |r: usize, c: usize| r * n + c;
    let mut table = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let (r1, c1) = (i / n, i % n);
            let (r2, c2) = (j / n, j % n);
            let mut v = vec![Scalar::zero(); dim];
            if c1 == r2 {
                v[idx(r1, c2)] = Scalar::one();
            }
            table.push(v);
        }
    }
    let mut unit = vec![Scalar::zero(); dim];
    for r in 0..n {
        unit[idx(r, r)] = Scalar::one();
    }
    let labels = (0..n)
        .flat_map(|r| (0..n).map(move |c| format!("e{}{}", r + 1, c + 1)))
        .collect();
    Algebra::from_structure_constants(labels, table, unit)
        .expect("matrix units satisfy the usual relations")
}

/// Truncated polynomials k[x]/(x^(n+1)): one loop with x^(n+1) = 0.
pub fn truncated_polynomials(n: usize) -> QuiverAlgebra {
    assert!(n >= 1);
    let pres = QuiverPresentation {
        vertices: vec!["v".into()],
        arrows: vec![Arrow { label: "x".into(), source: 0, target: 0 }],
        relations: vec![vec![(Scalar::one(), vec![0; n + 1])]],
    };
    algebra_from_quiver(&pres, n + 4).expect("truncation is finite-dimensional")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_dimensions() {
        assert_eq!(intro_fixture().algebra.dim(), 9);
        assert_eq!(kronecker().algebra.dim(), 4);
        assert_eq!(dual_numbers().algebra.dim(), 2);
        assert_eq!(a2_path().algebra.dim(), 3);
        assert_eq!(field().dim(), 1);
        assert_eq!(semisimple_product(3).dim(), 3);
        assert_eq!(matrix_algebra(2).dim(), 4);
        assert_eq!(truncated_polynomials(2).algebra.dim(), 3);
    }

    #[test]
    fn matrix_algebra_units_multiply_correctly() {
        let m = matrix_algebra(3);
        let e12 = m.basis_element(m.label_index("e12").unwrap());
        let e23 = m.basis_element(m.label_index("e23").unwrap());
        let e13 = m.basis_element(m.label_index("e13").unwrap());
        assert_eq!(e12.mul(&e23).unwrap(), e13);
        assert!(e23.mul(&e12).unwrap().is_zero());
    }

    #[test]
    fn kronecker_radical_squares_to_zero() {
        let k = kronecker();
        assert_eq!(k.algebra.radical_power_dims(), vec![2]);
    }
}
