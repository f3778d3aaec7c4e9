use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use staircase::feq::Solver;
use staircase::number::rat;
use staircase::orbits::{burnside_sum, orbit_series, orbit_series_at_one, orbit_series_exact, subexp_ratio_table};
use staircase::series::LaurentQPoly;
use staircase::symmetry::{Subgroup, SymmetryClass};
use staircase::Error;

/// Subgroups whose elements all map staircase polygons to staircase polygons.
const ACTING: [Subgroup; 5] = [Subgroup::Trivial, Subgroup::R2, Subgroup::D1, Subgroup::D2, Subgroup::D1D2];

#[test]
fn acting_subgroups_give_integer_orbit_counts() {
    let mut solver = Solver::<LaurentQPoly>::new(());
    for h in ACTING {
        let s = orbit_series(&mut solver, h, 40).unwrap();
        assert!(s.coeffs().iter().flat_map(|p| p.terms()).all(|(_, c)| !c.is_negative()));
    }
}

#[test]
fn other_subgroups_break_integrality() {
    // r, h and v do not preserve the staircase orientation, so the average over
    // the group is not an orbit count
    let expected = [
        (Subgroup::R, 4),
        (Subgroup::H, 6),
        (Subgroup::V, 6),
        (Subgroup::HV, 4),
        (Subgroup::D4, 4),
    ];
    for (h, m) in expected {
        match orbit_series_exact(h, 40) {
            Err(Error::BurnsideIntegrality { m: at, .. }) => assert_eq!(at, m, "{}", h.name()),
            other => panic!("{}: expected an integrality failure, got {other:?}", h.name()),
        }
    }
}

#[test]
fn d4_average_formula() {
    let mut solver = Solver::<LaurentQPoly>::new(());
    let sum = burnside_sum(&mut solver, Subgroup::D4, 12).unwrap();
    let mut by_hand = solver.series(SymmetryClass::Full, 12).unwrap().truncate(12);
    for (class, times) in [
        (SymmetryClass::R2, 1),
        (SymmetryClass::Square, 2),
        (SymmetryClass::D1, 1),
        (SymmetryClass::D2, 1),
        (SymmetryClass::Rect, 2),
    ] {
        for _ in 0..times {
            by_hand = by_hand.add(&solver.series(class, 12).unwrap().truncate(12));
        }
    }
    assert_eq!(sum, by_hand);
    assert_eq!(sum.coeffs()[2].at_one(), BigInt::from(8));
}

#[test]
fn coarser_groups_have_fewer_orbits() {
    let chains = [
        (Subgroup::Trivial, Subgroup::R2),
        (Subgroup::Trivial, Subgroup::D1),
        (Subgroup::Trivial, Subgroup::D2),
        (Subgroup::R2, Subgroup::D1D2),
        (Subgroup::D1, Subgroup::D1D2),
        (Subgroup::D2, Subgroup::D1D2),
    ];
    for (small, big) in chains {
        let a = orbit_series_at_one(small, 40).unwrap();
        let b = orbit_series_at_one(big, 40).unwrap();
        for m in 0..=40 {
            assert!(b.coeffs()[m] <= a.coeffs()[m], "{} vs {} at m = {m}", small.name(), big.name());
        }
    }
}

#[test]
fn orbit_moments_track_full_moments() {
    let mut solver = Solver::<LaurentQPoly>::new(());
    let full = solver.series(SymmetryClass::Full, 14).unwrap().truncate(14);
    for h in Subgroup::ALL {
        let sum = burnside_sum(&mut solver, h, 14).unwrap();
        for m in 10..=14 {
            let rows = subexp_ratio_table(h, &rat(0, 1), &[m]).unwrap();
            let ratio = rows[0].exact.clone().unwrap();
            for k in 1..=3u32 {
                let moment = |p: &LaurentQPoly| {
                    let (mut num, mut den) = (BigInt::zero(), BigInt::zero());
                    for (n, c) in p.terms() {
                        num += c * BigInt::from(n).pow(k);
                        den += c;
                    }
                    BigRational::new(num, den)
                };
                let gap = (moment(&sum.coeffs()[m]) - moment(&full.coeffs()[m])).abs();
                let bound = ratio.clone() * BigRational::from_integer(BigInt::from(m).pow(2 * k));
                assert!(gap <= bound, "{} at m = {m}, k = {k}", h.name());
            }
        }
    }
}

#[test]
fn half_turn_ratio_decreases() {
    let rows = subexp_ratio_table(Subgroup::R2, &rat(3, 1), &(20..=60).collect::<Vec<_>>()).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].exact < w[0].exact, "m = {}", w[1].m);
    }
}

#[test]
fn full_group_ratio_alternates_with_parity() {
    // diagonal and quarter-turn symmetric polygons only exist at even m
    let rows = subexp_ratio_table(Subgroup::D4, &rat(3, 1), &(20..=60).collect::<Vec<_>>()).unwrap();
    for w in rows.windows(2) {
        let up = w[1].exact > w[0].exact;
        assert_eq!(up, w[1].m % 2 == 0, "m = {}", w[1].m);
    }
}
