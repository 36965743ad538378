use k3lab::forms::{BinaryForm, ProjPoint};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_form(rng: &mut ChaCha8Rng, degree: usize) -> BinaryForm {
    let coeffs = (0..=degree).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    BinaryForm::from_complex(coeffs).unwrap()
}

fn residual(f: &BinaryForm, p: &ProjPoint) -> f64 {
    f.evaluate(p).norm() / f.max_coeff()
}

#[test]
fn random_degree_24_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..500 {
        let f = random_form(&mut rng, 24);
        let roots = f.roots_with_multiplicity(1e-8).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<u32>(), 24, "case {case}");
        for r in &roots {
            assert!(r.backward_error < 1e-8, "case {case}: {}", r.backward_error);
        }
    }
}

#[test]
fn planted_clusters_recover_multiplicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let order = 2 + case % 3;
        let centre = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let mut roots: Vec<Complex64> = vec![centre; order];
        while roots.len() < 24 {
            let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if (z - centre).norm() > 0.1 && roots.iter().all(|w| (w - z).norm() > 0.05) {
                roots.push(z);
            }
        }
        let f = BinaryForm::from_roots(&roots);
        let found = f.roots_with_multiplicity(1e-8).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert_eq!(found.iter().map(|r| r.multiplicity).sum::<u32>(), 24);
        let near: Vec<_> = found.iter().filter(|r| (r.point.affine_coordinate().unwrap() - centre).norm() < 1e-2).collect();
        assert_eq!(near.len(), 1, "case {case}: cluster split into {}", near.len());
        assert_eq!(near[0].multiplicity as usize, order, "case {case}");
    }
}

proptest! {
    #[test]
    fn evaluation_is_homogeneous(re in -2.0f64..2.0, im in -2.0f64..2.0, lre in 0.2f64..2.0, lim in -1.0f64..1.0, seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, 12);
        let p = ProjPoint::affine(Complex64::new(re, im));
        let (p0, p1) = p.coords();
        let lambda = Complex64::new(lre, lim);
        let lhs = f.evaluate_at(p0 * lambda, p1 * lambda);
        let rhs = lambda.powi(12) * f.evaluate(&p);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn random_form_residuals(seed in 0u64..10_000, degree in 1usize..=24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, degree);
        let roots = f.roots_with_multiplicity(1e-8).unwrap();
        prop_assert_eq!(roots.iter().map(|r| r.multiplicity as usize).sum::<usize>(), degree);
        for r in roots {
            let scale = if r.point.is_infinity() { 1.0 } else { r.point.affine_coordinate().unwrap().norm().max(1.0).powi(degree as i32) };
            prop_assert!(residual(&f, &r.point) < 1e-8 * scale.max(1.0) * 30.0);
        }
    }
}
