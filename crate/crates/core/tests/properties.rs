use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use k3si::catalog::named_lattice;
use k3si::exact::{coprime_basis, factor_squarefree, place_valuation, rat, smith, IntMatrix, Place, RatPoly};
use k3si::fibration::WeierstrassModel;
use k3si::lattice::{discriminant_form, enumerate_overlattices, root_count, Lattice};

fn poly(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|c| RatPoly::from_ints(&c))
}

fn nonconstant(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    poly(max_deg).prop_filter("nonconstant", |p| !p.is_constant())
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-9i64..=9, rows * cols).prop_map(move |v| {
        IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j]))
    })
}

/// Product of elementary row operations `rᵢ += c·rⱼ` and swaps.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..3 * n).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n);
        for (i, j, c, swap) in ops {
            if i == j {
                continue;
            }
            if swap {
                m.swap_rows(i, j);
            } else {
                let rj: Vec<BigInt> = m.row(j).to_vec();
                let mut rows = m.to_rows();
                for (x, y) in rows[i].iter_mut().zip(&rj) {
                    *x += y * c;
                }
                m = IntMatrix::from_rows(rows);
            }
        }
        m
    })
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_identity(m in int_matrix(3, 4)) {
        let f = smith(&m);
        prop_assert_eq!(&(&f.u * &m) * &f.v, f.d.clone());
        prop_assert!(is_unit(&f.u.det()) && is_unit(&f.v.det()));
        for i in 0..f.d.nrows() {
            for j in 0..f.d.ncols() {
                prop_assert!(i == j || f.d[(i, j)].is_zero());
            }
        }
        for i in 1..f.d.nrows().min(f.d.ncols()) {
            let (a, b) = (&f.d[(i - 1, i - 1)], &f.d[(i, i)]);
            let divides = if a.is_zero() { b.is_zero() } else { (b % a).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn coprime_basis_reconstructs(ps in prop::collection::vec(nonconstant(4), 1..4)) {
        let basis = coprime_basis(&ps).unwrap();
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                prop_assert!(a.poly.gcd(&b.poly).is_constant());
            }
        }
        for (k, p) in ps.iter().enumerate() {
            let prod = basis.iter().fold(RatPoly::from_int(1), |acc, e| &acc * &e.poly.pow(e.exponents[k]));
            prop_assert_eq!(prod, p.monic());
        }
    }

    #[test]
    fn valuation_is_additive(f in nonconstant(4), g in nonconstant(4), r in -3i64..=3) {
        let place = Place::at(&rat(r, 1));
        let fg = &f * &g;
        prop_assert_eq!(
            place_valuation(&fg, &place, 0).unwrap(),
            place_valuation(&f, &place, 0).unwrap() + place_valuation(&g, &place, 0).unwrap()
        );
    }

    #[test]
    fn factorization_round_trip(ps in prop::collection::vec(nonconstant(3), 1..4)) {
        let f = ps.iter().fold(RatPoly::from_int(1), |acc, p| &acc * p);
        let rad = f.squarefree_decomposition().iter().fold(RatPoly::from_int(1), |acc, (_, q)| &acc * q);
        let factors = factor_squarefree(&rad);
        let prod = factors.iter().fold(RatPoly::from_int(1), |acc, q| &acc * q);
        prop_assert_eq!(prod, rad.monic());
        for q in &factors {
            prop_assert!(!q.is_constant() && q.leading().is_one());
        }
    }

    #[test]
    fn discriminant_relation_on_random_models(
        a1 in poly(1), a2 in poly(2), a3 in poly(3), a4 in poly(4), a6 in poly(6)
    ) {
        // models with Δ ≡ 0 are rejected at construction and skipped
        if let Ok(w) = WeierstrassModel::long(1, a1, a2, a3, a4, a6) {
            let c = w.c_invariants();
            prop_assert_eq!(&c.c4.pow(3) - &c.c6.pow(2), c.delta.scale(&rat(1728, 1)));
        }
    }

    #[test]
    fn quadratic_form_scales_by_squares(a in 1i64..=6, b in 1i64..=6, n in 1i64..=7) {
        let l = Lattice::direct_sum(&[&Lattice::diagonal(&[2 * a, -2 * b]), &named_lattice("A2").unwrap()]);
        let q = discriminant_form(&l).unwrap();
        for x in q.elements().unwrap() {
            let nx: Vec<i64> = x
                .iter()
                .zip(q.invariants())
                .map(|(&c, d)| (c * n).rem_euclid(i64::try_from(d).unwrap()))
                .collect();
            let diff = q.value(&nx) - q.value(&x) * rat(n * n, 1);
            prop_assert!((diff / rat(2, 1)).is_integer());
        }
        prop_assert_eq!(q.order(), l.det().abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn glued_overlattice_determinant(blocks in prop::collection::vec(0usize..4, 2..4), p in prop::sample::select(vec![2u64, 3])) {
        let parts: Vec<Lattice> = blocks
            .iter()
            .map(|&k| match k {
                0 => Lattice::diagonal(&[2 * p as i64]),
                1 => Lattice::diagonal(&[-2 * p as i64]),
                2 => named_lattice("A2").unwrap(),
                _ => Lattice::diagonal(&[6 * p as i64]),
            })
            .collect();
        let l = Lattice::direct_sum(&parts.iter().collect::<Vec<_>>());
        let mut ranges = Vec::new();
        let mut off = 0;
        for b in &parts {
            ranges.push(off..off + b.rank());
            off += b.rank();
        }
        let search = enumerate_overlattices(&l, p, &ranges).unwrap();
        for c in &search.candidates {
            let o = &c.overlattice;
            prop_assert_eq!(o.index.clone(), BigInt::from(p));
            prop_assert_eq!(o.lattice.det() * &o.index * &o.index, l.det());
            prop_assert!(o.lattice.is_even());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_survive_basis_change(
        (name, b) in prop::sample::select(vec![("A2(-1)", 2), ("D4(-1)", 4), ("E6(-1)", 6), ("A2(-1)+D4(-1)", 6)])
            .prop_flat_map(|(name, n)| (Just(name), unimodular(n)))
    ) {
        let l = named_lattice(name).unwrap();
        prop_assert!(is_unit(&b.det()));
        let m = l.restrict(&b).unwrap();
        prop_assert_eq!(m.det(), l.det());
        prop_assert_eq!(m.signature(), l.signature());
        prop_assert_eq!(m.is_even(), l.is_even());
        let roots = root_count(&l).unwrap();
        prop_assert_eq!(root_count(&m).unwrap(), roots);
        // positive-definite version counts vectors of norm +2
        prop_assert_eq!(root_count(&m.rescale(-1)).unwrap(), roots);
    }
}
