//! The structural check suite behind `ultraspec verify`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::VerifySettings;
use crate::field::{Field, FieldElement};
use crate::model::{
    build_grid_with_cap, project_cutoff, project_smooth, FourierKernel, Grid, GridFunction, ModelError, ModelParams,
    DENSE_FOURIER_LIMIT, HERMITICITY_LIMIT,
};

/// Threshold for floating-point identities of the Fourier transform and projections.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub defect: f64,
    pub threshold: f64,
}

impl CheckResult {
    fn new(name: impl Into<String>, defect: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: defect <= threshold, defect, threshold }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyOutcome {
    pub checks: Vec<CheckResult>,
}

impl VerifyOutcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Mutation hook for the suite's own tests.
#[derive(Clone, Debug, Default)]
pub struct VerifyHooks {
    /// Perturb one phase of the level-`n` kernel before the Fourier checks.
    pub corrupt_kernel: Option<(usize, usize)>,
}

fn random_element(field: &Field, rng: &mut ChaCha8Rng, lo_min: i32) -> FieldElement {
    let lo = rng.random_range(lo_min..=0);
    let digits: Vec<u32> = (0..6).map(|_| rng.random_range(0..field.q())).collect();
    field.element(lo, &digits).expect("digits below q")
}

fn random_function(len: usize, rng: &mut ChaCha8Rng) -> GridFunction {
    GridFunction::from_fn(len, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn field_checks(field: &Field, s: &VerifySettings, out: &mut Vec<CheckResult>) {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut ultra: f64 = 0.0;
    let mut neg_failures = 0usize;
    let mut additivity_failures = 0usize;
    for _ in 0..s.pairs {
        let x = random_element(field, &mut rng, -4);
        let y = random_element(field, &mut rng, -4);
        let sum = field.add(&x, &y);
        ultra = ultra.max(field.abs_value(&sum) - field.abs_value(&x).max(field.abs_value(&y)));
        let prec = 12;
        let back = field.add(&x, &field.neg(&x, prec));
        if back.valuation().is_some_and(|v| v < prec) {
            neg_failures += 1;
        }
        let lhs = field.character_phase(&sum);
        let rhs = field.character_phase(&x) + field.character_phase(&y);
        if lhs != rhs {
            additivity_failures += 1;
        }
    }
    out.push(CheckResult::new("field.ultrametric", ultra.max(0.0), 0.0));
    out.push(CheckResult::new("field.negation", neg_failures as f64, 0.0));
    out.push(CheckResult::new("character.additivity", additivity_failures as f64, 0.0));

    // χ ≡ 1 on O, and some element of absolute value q is not in the kernel.
    let mut nontrivial_on_o = 0usize;
    for _ in 0..s.pairs {
        let x = random_element(field, &mut rng, 0);
        if !field.character_phase(&x).is_zero() {
            nontrivial_on_o += 1;
        }
    }
    let witness = (1..field.q()).any(|a| !field.character_phase(&field.monomial(a, -1)).is_zero());
    out.push(CheckResult::new("character.rank_zero", nontrivial_on_o as f64 + if witness { 0.0 } else { 1.0 }, 0.0));
}

fn max_dev(a: &GridFunction, b: &GridFunction) -> f64 {
    (a - b).camax()
}

fn fourier_checks(grid: &Grid, kernel: &FourierKernel, out: &mut Vec<CheckResult>, rng: &mut ChaCha8Rng) {
    let len = grid.len();
    let id = DMatrix::<Complex64>::identity(len, len);
    if len <= DENSE_FOURIER_LIMIT {
        let f = kernel.matrix().expect("within dense limit");
        out.push(CheckResult::new("fourier.unitarity", (&f * f.adjoint() - &id).camax(), IDENTITY_TOL));
        let f2 = &f * &f;
        let reflect = DMatrix::from_fn(len, len, |i, j| {
            Complex64::new(if grid.neg_index(i) == j { 1.0 } else { 0.0 }, 0.0)
        });
        out.push(CheckResult::new("fourier.reflection", (&f2 - &reflect).camax(), IDENTITY_TOL));
        out.push(CheckResult::new("fourier.fourth_power", (&f2 * &f2 - &id).camax(), IDENTITY_TOL));
    } else {
        // Too large to materialize: probe with random functions.
        let mut unit: f64 = 0.0;
        let mut refl: f64 = 0.0;
        let mut fourth: f64 = 0.0;
        for _ in 0..4 {
            let v = random_function(len, rng);
            let inv = kernel.apply(&kernel.apply(&v, false), true);
            unit = unit.max(max_dev(&inv, &v));
            let f2 = kernel.apply(&kernel.apply(&v, false), false);
            let r = GridFunction::from_fn(len, |i, _| v[grid.neg_index(i)]);
            refl = refl.max(max_dev(&f2, &r));
            let f4 = kernel.apply(&kernel.apply(&f2, false), false);
            fourth = fourth.max(max_dev(&f4, &v));
        }
        out.push(CheckResult::new("fourier.unitarity", unit, IDENTITY_TOL));
        out.push(CheckResult::new("fourier.reflection", refl, IDENTITY_TOL));
        out.push(CheckResult::new("fourier.fourth_power", fourth, IDENTITY_TOL));
    }
    let mut parseval: f64 = 0.0;
    for _ in 0..8 {
        let v = random_function(len, rng);
        let w = kernel.apply(&v, false);
        parseval = parseval.max((w.norm_squared() - v.norm_squared()).abs() / v.norm_squared());
    }
    out.push(CheckResult::new("fourier.parseval", parseval, IDENTITY_TOL));
}

fn projection_checks(grid: &Grid, samples: usize, out: &mut Vec<CheckResult>, rng: &mut ChaCha8Rng) {
    let m = grid.n() as i32;
    let kernel = FourierKernel::new(grid);
    let dense = (grid.len() <= DENSE_FOURIER_LIMIT).then(|| kernel.matrix().expect("within dense limit"));
    let fwd = |v: &GridFunction| match &dense {
        Some(f) => f * v,
        None => kernel.apply(v, false),
    };
    let (mut fc, mut fs, mut cs): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for k in -m..=m {
        for _ in 0..samples {
            let v = random_function(grid.len(), rng);
            let scale = v.camax().max(1.0);
            fc = fc.max(max_dev(&fwd(&project_cutoff(grid, k, &v)), &project_smooth(grid, k, &fwd(&v))) / scale);
            fs = fs.max(max_dev(&fwd(&project_smooth(grid, k, &v)), &project_cutoff(grid, k, &fwd(&v))) / scale);
            // B_k sits inside one coset of β^k O when k < 0, so the pair only commutes for k >= 0.
            if k < 0 {
                continue;
            }
            cs = cs.max(max_dev(
                &project_cutoff(grid, k, &project_smooth(grid, k, &v)),
                &project_smooth(grid, k, &project_cutoff(grid, k, &v)),
            ));
        }
    }
    out.push(CheckResult::new(format!("projection.fourier_cutoff.m{m}"), fc, IDENTITY_TOL));
    out.push(CheckResult::new(format!("projection.fourier_smooth.m{m}"), fs, IDENTITY_TOL));
    out.push(CheckResult::new(format!("projection.commute.m{m}"), cs, IDENTITY_TOL));
}

/// Runs every check at level `n` (projection identities at each level `1..=n`).
pub fn run_verify(params: &ModelParams, n: u32, settings: &VerifySettings) -> Result<VerifyOutcome, ModelError> {
    run_verify_with(params, n, settings, &VerifyHooks::default())
}

pub fn run_verify_with(
    params: &ModelParams,
    n: u32,
    settings: &VerifySettings,
    hooks: &VerifyHooks,
) -> Result<VerifyOutcome, ModelError> {
    let mut checks = Vec::new();
    field_checks(&params.field, settings, &mut checks);

    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.wrapping_add(1));
    let grid = build_grid_with_cap(&params.field, n, params.grid_cap)?;
    let mut kernel = FourierKernel::new(&grid);
    if let Some((i, j)) = hooks.corrupt_kernel {
        kernel.corrupt_entry(i, j);
    }
    fourier_checks(&grid, &kernel, &mut checks, &mut rng);

    for m in 1..=n {
        let g = build_grid_with_cap(&params.field, m, params.grid_cap)?;
        projection_checks(&g, settings.samples, &mut checks, &mut rng);
    }

    let model = params.assemble(n)?;
    checks.push(CheckResult::new("hamiltonian.hermiticity", model.hermiticity_defect, HERMITICITY_LIMIT));
    Ok(VerifyOutcome { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, FieldSpec};
    use crate::model::RadialPotential;

    fn params(spec: FieldSpec) -> ModelParams {
        ModelParams::new(make_field(spec).unwrap(), 2.0, 0.5, RadialPotential::harmonic(0.5))
    }

    #[test]
    fn suite_passes_on_both_families() {
        let s = VerifySettings { samples: 5, pairs: 50, ..Default::default() };
        for spec in [FieldSpec::eisenstein(3, 2), FieldSpec::laurent(3, 1)] {
            let o = run_verify(&params(spec), 2, &s).unwrap();
            assert!(o.all_passed(), "{:?}", o.failures().collect::<Vec<_>>());
            assert!(o.get("fourier.unitarity").is_some());
        }
    }

    #[test]
    fn corrupted_kernel_is_caught() {
        let s = VerifySettings { samples: 2, pairs: 10, ..Default::default() };
        let hooks = VerifyHooks { corrupt_kernel: Some((4, 7)) };
        let o = run_verify_with(&params(FieldSpec::eisenstein(3, 2)), 1, &s, &hooks).unwrap();
        assert!(!o.get("fourier.unitarity").unwrap().passed);
    }
}
