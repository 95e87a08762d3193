//! Property tests for the exact linear algebra layer.

use std::sync::Arc;

use proptest::prelude::*;

use blockcoh::field::{Field, Scalar};
use blockcoh::matrix::{in_span, DenseMatrix, SparseMatrix};

fn dense_from_entries(field: &Arc<Field>, rows: usize, cols: usize, entries: &[u8]) -> DenseMatrix {
    let q = field.order() as u16;
    let mut m = DenseMatrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let v = (entries[i * cols + j] as u16) % q;
            if v != 0 {
                m.set(i, j, v);
            }
        }
    }
    m
}

fn to_sparse(d: &DenseMatrix) -> SparseMatrix {
    let mut s = SparseMatrix::new(d.field(), d.rows(), d.cols());
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            let v = d.get(i, j);
            if v != 0 {
                s.add_entry(i, j, v);
            }
        }
    }
    s
}

fn field_for(which: u8) -> Arc<Field> {
    match which % 3 {
        0 => Field::new(2, 1).unwrap(),
        1 => Field::new(3, 1).unwrap(),
        _ => Field::new(2, 2).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_transpose_and_nullity(
        which in 0u8..3,
        rows in 1usize..=16,
        cols in 1usize..=16,
        entries in proptest::collection::vec(any::<u8>(), 256),
    ) {
        let field = field_for(which);
        let m = dense_from_entries(&field, rows, cols, &entries);
        let rank = m.rank();
        prop_assert_eq!(rank, m.transpose().rank());
        prop_assert_eq!(rank + m.nullspace().len(), cols);
        // sparse elimination agrees on rank and nullity
        let s = to_sparse(&m);
        prop_assert_eq!(s.rank(), rank);
        prop_assert_eq!(s.nullspace().len(), cols - rank);
    }

    #[test]
    fn nullspace_vectors_map_to_zero(
        which in 0u8..3,
        rows in 1usize..=12,
        cols in 1usize..=12,
        entries in proptest::collection::vec(any::<u8>(), 144),
    ) {
        let field = field_for(which);
        let m = dense_from_entries(&field, rows, cols, &entries);
        for v in m.nullspace() {
            prop_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn span_membership_closed_under_combination(
        which in 0u8..3,
        dim in 1usize..=8,
        basis_entries in proptest::collection::vec(any::<u8>(), 64),
        coeffs in proptest::collection::vec(any::<u8>(), 8),
    ) {
        let field = field_for(which);
        let q = field.order() as u16;
        let nb = 3.min(dim);
        let basis: Vec<Vec<Scalar>> = (0..nb)
            .map(|i| {
                (0..dim)
                    .map(|j| (basis_entries[i * dim + j] as u16) % q)
                    .collect()
            })
            .collect();
        // any linear combination is in the span
        let mut combo = vec![0 as Scalar; dim];
        for (i, b) in basis.iter().enumerate() {
            let c = (coeffs[i] as u16) % q;
            for (x, &v) in combo.iter_mut().zip(b) {
                *x = field.add(*x, field.mul(c, v));
            }
        }
        prop_assert!(in_span(&field, &combo, &basis).unwrap());
    }
}
