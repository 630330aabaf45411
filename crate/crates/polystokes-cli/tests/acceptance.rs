//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
//!
//! Runs without the libtest harness so the table is always printed:
//! `cargo test -p polystokes-cli --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{Matrix2, Vector2};
use polystokes::mesh::{generate_cartesian, generate_hexagonal, perturb};
use polystokes::spaces::{Options, VrotSign};
use polystokes::stokes::{convergence_study, slopes, BoundaryCondition, ConvergenceTable, Family, Study};
use polystokes::verify::{commutation_errors, potential_error, reproduction_errors, stabilization_seminorm, verify};
use polystokes::{Mesh, Scheme};

const COMPLEX_TOL: f64 = 1e-10;
const COMPLEX_RUNTIME: Duration = Duration::from_secs(30);
const COMMUTATION_TOL: f64 = 1e-10;
const REPRODUCTION_TOL: f64 = 1e-10;
const REPRODUCTION_SAMPLES: usize = 20;
const EXACTNESS_MAX_DOFS: usize = 2000;
const POTENTIAL_SLACK: f64 = 1.8;
const STABILIZATION_SLACK: f64 = 0.8;
const STOKES_SLACK: f64 = 0.8;
const STOKES_RUNTIME: Duration = Duration::from_secs(600);
const DIVERGENCE_TOL: f64 = 1e-8;
const PERTURBATION: f64 = 0.2;
const SEED: u64 = 1;

struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn line(o: &Outcome) -> String {
    format!("criterion {:>2} {:<4} {:<34} {}", o.id, if o.passed { "PASS" } else { "FAIL" }, o.title, o.detail)
}

fn property_meshes() -> Vec<(&'static str, Mesh)> {
    let c = generate_cartesian(4).unwrap();
    vec![
        ("cartesian 4x4", c.clone()),
        ("hexagonal 3", generate_hexagonal(3).unwrap()),
        ("perturbed 4x4", perturb(&c, PERTURBATION, SEED).unwrap()),
    ]
}

/// Largest |D ROT| entry over the property meshes and k = 0..3.
fn complex_defect(sign: VrotSign) -> f64 {
    let mut worst = 0.0f64;
    for (_, m) in property_meshes() {
        for k in 0..=3 {
            let s = Scheme::with_options(&m, k, Options { vrot_sign: sign }).unwrap();
            worst = worst.max(s.ops.div_rot().max_abs());
        }
    }
    worst
}

fn complex_property() -> Outcome {
    let t = Instant::now();
    let worst = complex_defect(VrotSign::Standard);
    let elapsed = t.elapsed();
    Outcome {
        id: 1,
        title: "complex property",
        passed: worst <= COMPLEX_TOL && elapsed <= COMPLEX_RUNTIME,
        detail: format!("max|D ROT| = {worst:.2e} (tol {COMPLEX_TOL:.0e}), {:.1} s", elapsed.as_secs_f64()),
    }
}

fn exactness() -> Outcome {
    let mut passed = true;
    let mut checked = 0;
    let mut notes = Vec::new();
    for (name, m) in property_meshes() {
        for k in 0..=2 {
            let r = verify(&m, k, Options::default()).unwrap();
            let ex: Vec<_> = r.checks.iter().filter(|c| c.name.starts_with("exactness")).collect();
            let dofs = Scheme::new(&m, k).unwrap().disc.grad.dim();
            if dofs > EXACTNESS_MAX_DOFS {
                continue;
            }
            checked += 1;
            if ex.len() != 3 || ex.iter().any(|c| !c.passed) {
                passed = false;
                notes.push(format!("{name} k={k}"));
            }
        }
    }
    Outcome {
        id: 2,
        title: "kernel and exactness (SVD)",
        passed: passed && checked > 0,
        detail: if notes.is_empty() { format!("{checked} mesh/degree pairs") } else { format!("failed: {}", notes.join(", ")) },
    }
}

fn commutation() -> Outcome {
    let m = perturb(&generate_cartesian(4).unwrap(), PERTURBATION, SEED).unwrap();
    let mut worst = 0.0f64;
    for k in 0..=2 {
        let e = commutation_errors(&Scheme::new(&m, k).unwrap()).unwrap();
        worst = e.iter().fold(worst, |a, &b| a.max(b));
    }
    Outcome {
        id: 3,
        title: "commutation",
        passed: worst <= COMMUTATION_TOL,
        detail: format!("max per-dof error {worst:.2e} (tol {COMMUTATION_TOL:.0e})"),
    }
}

fn reproduction() -> Outcome {
    let mut worst = 0.0f64;
    for (_, m) in property_meshes() {
        for k in 0..=2 {
            let e = reproduction_errors(&Scheme::new(&m, k).unwrap(), REPRODUCTION_SAMPLES, 7 + k as u64).unwrap();
            worst = worst.max(e[0]).max(e[1]);
        }
    }
    Outcome {
        id: 4,
        title: "polynomial reproduction",
        passed: worst <= REPRODUCTION_TOL,
        detail: format!("max error {worst:.2e} over {REPRODUCTION_SAMPLES} samples (tol {REPRODUCTION_TOL:.0e})"),
    }
}

fn trig_w(x: &Vector2<f64>) -> Vector2<f64> {
    Vector2::new((2.0 * x.x).sin() * (3.0 * x.y).cos(), (x.x).cos() * (2.0 * x.y).sin())
}

fn trig_grad_w(x: &Vector2<f64>) -> Matrix2<f64> {
    Matrix2::new(
        2.0 * (2.0 * x.x).cos() * (3.0 * x.y).cos(),
        -3.0 * (2.0 * x.x).sin() * (3.0 * x.y).sin(),
        -(x.x).sin() * (2.0 * x.y).sin(),
        2.0 * (x.x).cos() * (2.0 * x.y).cos(),
    )
}

/// Final slopes of the potential error and the stabilization seminorm on
/// cartesian {8, 16, 32}.
fn consistency_slopes(k: usize) -> (f64, f64) {
    let (mut h, mut ep, mut es) = (vec![], vec![], vec![]);
    for n in [8, 16, 32] {
        let s = Scheme::new(&generate_cartesian(n).unwrap(), k).unwrap();
        h.push(s.disc.mesh.h());
        ep.push(potential_error(&s, &trig_w).unwrap());
        es.push(stabilization_seminorm(&s, &trig_grad_w).unwrap());
    }
    (*slopes(&h, &ep).last().unwrap(), *slopes(&h, &es).last().unwrap())
}

fn consistency() -> (Outcome, Outcome) {
    let (mut p_ok, mut s_ok) = (true, true);
    let (mut p_txt, mut s_txt) = (vec![], vec![]);
    for k in 0..=1 {
        let (sp, ss) = consistency_slopes(k);
        p_ok &= sp >= k as f64 + POTENTIAL_SLACK;
        s_ok &= ss >= k as f64 + STABILIZATION_SLACK;
        p_txt.push(format!("k={k}: {sp:.2} (need {:.1})", k as f64 + POTENTIAL_SLACK));
        s_txt.push(format!("k={k}: {ss:.2} (need {:.1})", k as f64 + STABILIZATION_SLACK));
    }
    (
        Outcome { id: 5, title: "primal consistency order", passed: p_ok, detail: p_txt.join(", ") },
        Outcome { id: 6, title: "stabilization consistency order", passed: s_ok, detail: s_txt.join(", ") },
    )
}

fn stokes_tables() -> (Vec<ConvergenceTable>, Duration) {
    let t = Instant::now();
    let mut tables = Vec::new();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        for k in 0..=2 {
            let levels = if k < 2 { vec![8, 16, 32] } else { vec![4, 8, 16] };
            let study = Study {
                family: Family::Cartesian,
                levels,
                k,
                bc: bc.clone(),
                solution: "superbubble".into(),
                mu: 1.0,
                seed: SEED,
            };
            tables.push(convergence_study(&study).unwrap());
        }
    }
    (tables, t.elapsed())
}

fn stokes_convergence(tables: &[ConvergenceTable], elapsed: Duration) -> Outcome {
    let mut passed = elapsed <= STOKES_RUNTIME;
    let mut txt = Vec::new();
    for t in tables {
        let s = t.final_slope().unwrap_or(f64::NAN);
        passed &= s >= t.k as f64 + STOKES_SLACK;
        txt.push(format!("{} k={}: {s:.2}", t.bc, t.k));
    }
    txt.push(format!("{:.1} s", elapsed.as_secs_f64()));
    Outcome { id: 7, title: "Stokes convergence", passed, detail: txt.join(", ") }
}

fn incompressibility(tables: &[ConvergenceTable]) -> Outcome {
    let worst = tables.iter().flat_map(|t| &t.rows).map(|r| r.report.divergence).fold(0.0f64, f64::max);
    Outcome {
        id: 8,
        title: "discrete incompressibility",
        passed: worst <= DIVERGENCE_TOL,
        detail: format!("max ‖D u_h‖/‖u_h‖ = {worst:.2e} (tol {DIVERGENCE_TOL:.0e})"),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_polystokes"))
            .args(["converge", "--family", "tilted", "--levels", "4,8", "--degree", "1", "--bc", "neumann", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok_a, a) = run("a.csv");
    let (ok_b, b) = run("b.csv");
    Outcome {
        id: 9,
        title: "deterministic converge CSV",
        passed: ok_a && ok_b && !a.is_empty() && a == b,
        detail: format!("{} bytes, identical: {}", a.len(), a == b),
    }
}

fn negative_control() -> Outcome {
    let worst = complex_defect(VrotSign::Flipped);
    Outcome {
        id: 10,
        title: "flipped VROT breaks criterion 1",
        passed: worst > COMPLEX_TOL,
        detail: format!("max|D ROT| = {worst:.2e} with flipped sign"),
    }
}

fn main() {
    let mut outcomes = vec![complex_property(), exactness(), commutation(), reproduction()];
    let (c5, c6) = consistency();
    outcomes.push(c5);
    outcomes.push(c6);
    let (tables, elapsed) = stokes_tables();
    outcomes.push(stokes_convergence(&tables, elapsed));
    outcomes.push(incompressibility(&tables));
    outcomes.push(determinism());
    outcomes.push(negative_control());

    for o in &outcomes {
        println!("{}", line(o));
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("acceptance: {}/{} criteria pass", outcomes.len() - failed.len(), outcomes.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
