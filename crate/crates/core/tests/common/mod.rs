//! Seeded random generators shared by the integration suites.

use quiver_dt::motive::Motive;
use quiver_dt::qtorus::GradedSeries;
use quiver_dt::quiver::{DimVector, Quiver};
use rand::rngs::StdRng;
use rand::Rng;
use std::sync::Arc;

pub fn random_poly_coeffs(rng: &mut StdRng, max_deg: usize) -> Vec<i64> {
    let deg = rng.gen_range(0..=max_deg);
    (0..=deg).map(|_| rng.gen_range(-3..=3)).collect()
}

pub fn random_motive(rng: &mut StdRng) -> Motive {
    loop {
        let num = random_poly_coeffs(rng, 3);
        let den = random_poly_coeffs(rng, 2);
        if let Ok(m) = Motive::fraction(&num, &den) {
            return m;
        }
    }
}

#[allow(dead_code)]
pub fn random_nonzero_motive(rng: &mut StdRng) -> Motive {
    loop {
        let m = random_motive(rng);
        if !m.is_zero() {
            return m;
        }
    }
}

/// The r-arrow Kronecker quiver on two vertices.
pub fn kronecker(r: u32) -> Quiver {
    let arrows = (1..=r)
        .map(|i| (format!("a{}", i), "1".to_string(), "2".to_string()))
        .collect();
    Quiver::new(vec!["1".into(), "2".into()], arrows).unwrap()
}

/// A quiver with a nontrivial antisymmetrized Euler form half the time.
pub fn random_test_quiver(rng: &mut StdRng) -> Arc<Quiver> {
    match rng.gen_range(0..3) {
        0 => Arc::new(Quiver::a2()),
        1 => Arc::new(kronecker(2)),
        _ => Arc::new(Quiver::loop_quiver(rng.gen_range(0..3))),
    }
}

/// Sparse random series with the requested constant term.
pub fn random_series(
    rng: &mut StdRng,
    quiver: &Arc<Quiver>,
    bound: u32,
    constant: Motive,
) -> GradedSeries {
    let mut s = GradedSeries::zero(quiver.clone(), bound);
    s.set_coeff(DimVector::zero(quiver.vertex_count()), constant);
    for d in DimVector::all_up_to(quiver.vertex_count(), bound) {
        if rng.gen_bool(0.6) {
            s.set_coeff(d, random_motive(rng));
        }
    }
    s
}
