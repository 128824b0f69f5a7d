//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the console.
//! The process fails on any failing clause except those listed in
//! `UNATTAINABLE`, which are still evaluated and reported as FAIL.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use photon_su6::algebra::*;
use photon_su6::field::{classify_texture, skyrmion_number, StokesField, TextureLabel, TransverseGrid, CLASSIFY_TOL};
use photon_su6::linalg::ComplexMatrix;
use photon_su6::optics::{poincare_rotator_bench, sweep};
use photon_su6::state::*;
use photon_su6::testing::solid_angle_skyrmion_number;
use photon_su6_lab::bench::{parse_bench, serialize_bench};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (criterion, clause) pairs that cannot hold; see the README.
const UNATTAINABLE: &[(u32, &str)] = &[(8, "unit charge")];

type Check = fn() -> Vec<Clause>;

struct Clause {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn clause(name: &'static str, pass: bool, detail: impl Into<String>) -> Clause {
    Clause { name, pass, detail: detail.into() }
}

fn below(name: &'static str, value: f64, tol: f64) -> Clause {
    clause(name, value < tol, format!("{value:.3e} < {tol:.0e}"))
}

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn random_state(rng: &mut ChaCha8Rng) -> CoherentState {
    loop {
        let alpha: [Complex64; 6] =
            std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        if let Ok(s) = CoherentState::new(alpha) {
            return s;
        }
    }
}

fn random_direction(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..DIM).map(|_| rng.random_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_1() -> Vec<Clause> {
    let basis = su6_basis();
    let g = structure_constants(&basis).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let jacobi = (0..100)
        .map(|_| {
            let [l, m, n] = std::array::from_fn(|_| rng.random_range(0..DIM));
            jacobi_residual(&basis, l, m, n)
        })
        .fold(0.0, f64::max);
    let pairs = (0..DIM).flat_map(|l| (l + 1..DIM).map(move |m| (l, m))).collect::<Vec<_>>();
    let closure = pairs.iter().map(|&(l, m)| g.pair_closure_residual(&basis, l, m)).fold(0.0, f64::max);
    vec![
        clause("35 generators", basis.len() == 35, basis.len().to_string()),
        clause("families (3,8,24)", basis.family_counts() == (3, 8, 24), format!("{:?}", basis.family_counts())),
        below("hermitian", basis.hermiticity().0, 1e-12),
        below("traceless", basis.tracelessness().0, 1e-12),
        below("trace-orthonormal", basis.orthonormality().0, 1e-12),
        clause("595 pairs", pairs.len() == 595, pairs.len().to_string()),
        below("closure", closure, 1e-10),
        below("jacobi x100", jacobi, 1e-9),
    ]
}

fn diag(d: [f64; 6]) -> ComplexMatrix {
    ComplexMatrix::from_fn(6, 6, |r, c| Complex64::new(if r == c { d[r] } else { 0.0 }, 0.0))
}

fn criterion_2() -> Vec<Clause> {
    let sk = skyrmion_generators();
    let an = antiskyrmion_generators();
    let paulis = pauli_matrices();
    let exact_paulis = |gens: &[ComplexMatrix; 3], idx: [usize; 2]| {
        gens.iter().zip(&paulis).all(|(m, p)| {
            let outside = (0..6)
                .flat_map(|r| (0..6).map(move |c| (r, c)))
                .filter(|(r, c)| !(idx.contains(r) && idx.contains(c)))
                .all(|(r, c)| m[(r, c)] == Complex64::new(0.0, 0.0));
            restrict(m, &idx) == *p && outside
        })
    };
    vec![
        clause("S3 = diag(0,0,1,-1,0,0)", sk[2] == diag([0.0, 0.0, 1.0, -1.0, 0.0, 0.0]), "entrywise =="),
        clause("A3 = diag(0,0,1,0,-1,0)", an[2] == diag([0.0, 0.0, 1.0, 0.0, -1.0, 0.0]), "entrywise =="),
        clause("S triple on (|3>,|4>)", exact_paulis(&sk, [2, 3]), "entrywise =="),
        clause("A triple on (|3>,|5>)", exact_paulis(&an, [2, 4]), "entrywise =="),
    ]
}

fn criterion_3() -> Vec<Clause> {
    let basis = su6_basis();
    let adj = adjoint_matrices(&structure_constants(&basis).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst, mut directions) = (0.0f64, 0);
    for k in 0..100 {
        let state = random_state(&mut rng);
        let axis = if k % 5 == 4 {
            directions += 1;
            RotationAxis::Direction(random_direction(&mut rng))
        } else {
            RotationAxis::Generator(rng.random_range(0..DIM))
        };
        let dphi = rng.random_range(-2.0 * PI..2.0 * PI);
        worst = worst.max(correspondence_check(&state, &basis, &adj, &axis, dphi).unwrap());
    }
    vec![
        below("adjoint vs unitary x100", worst, 1e-9),
        clause("arbitrary directions", directions == 20, directions.to_string()),
    ]
}

fn criterion_4() -> Vec<Clause> {
    let basis = su6_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut radius, mut conserved) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let mut state = random_state(&mut rng).with_scale(rng.random_range(0.5..5.0), rng.random_range(0.5..2.0));
        let expected = state.scale() * (5.0f64 / 3.0).sqrt();
        radius = radius.max((all_expectations(&state, &basis).norm() - expected).abs());
        for _ in 0..5 {
            let u = exp_generator(&basis.combine(&random_direction(&mut rng)), rng.random_range(-PI..PI)).unwrap();
            state = apply_unitary(&state, &u).unwrap();
            conserved = conserved.max((all_expectations(&state, &basis).norm() - expected).abs());
        }
    }
    let unit = all_expectations(&named_state("neel_out").unwrap(), &basis).norm();
    vec![
        below("radius x100", radius, 1e-10),
        below("after 5 rotations", conserved, 1e-10),
        clause("≈ 1.29099", (unit - 1.29099).abs() < 5e-6, format!("{unit:.6}")),
    ]
}

fn criterion_5() -> Vec<Clause> {
    let sky = |n: &str| skyrmion_sphere(&named_state(n).unwrap()).coords;
    let cases = [
        ("Néel-out", sky("neel_out"), [1.0, 0.0, 0.0]),
        ("left Bloch", sky("bloch_left"), [0.0, 1.0, 0.0]),
        ("Néel-in", sky("neel_in"), [-1.0, 0.0, 0.0]),
        ("right Bloch", sky("bloch_right"), [0.0, -1.0, 0.0]),
        ("antiskyrmion", antiskyrmion_sphere(&named_state("antiskyrmion_h").unwrap()).coords, [1.0, 0.0, 0.0]),
    ];
    let mut out: Vec<Clause> = cases.iter().map(|(n, got, want)| below(n, max_diff(got, want), 1e-12)).collect();
    let neel = named_state("neel_out").unwrap();
    let ortho = overlap(&neel, &named_state("neel_in").unwrap()).norm();
    let half = overlap(&neel, &named_state("antiskyrmion_h").unwrap());
    out.push(below("<out|in> = 0", ortho, 1e-12));
    out.push(clause("<out|anti> = 1/2", (half - 0.5).norm() < 1e-12, format!("{half:.3e}")));
    out
}

fn criterion_6() -> Vec<Clause> {
    let bench = parse_bench(&fs::read_to_string(manifest().join("data/fig1.bench")).unwrap()).unwrap();
    let input = named_state("gaussian_h").unwrap();
    let phase = sweep(&bench, &input, &bench.sweeps[0]).unwrap();
    let rotator = sweep(&bench, &input, &bench.sweeps[1]).unwrap();
    let rate_error = |angles: &[f64], step: f64, rate: f64| {
        unwrap_angles(angles)
            .windows(2)
            .map(|w| (((w[1] - w[0]) / step.to_radians()).abs() - rate).abs())
            .fold(0.0, f64::max)
    };
    let phi: Vec<f64> = phase.iter().map(|f| f.observables.skyrmion.phi).collect();
    // polar angle measured along the great circle the rotator traces through both poles
    let chi: Vec<f64> = rotator
        .iter()
        .map(|f| {
            let [s1, _, s3] = f.observables.skyrmion.coords;
            s1.atan2(s3)
        })
        .collect();
    let off_plane = rotator.iter().map(|f| f.observables.skyrmion.coords[1].abs()).fold(0.0, f64::max);
    let at_90 = phase.iter().find(|f| (f.parameter - 90.0).abs() < 1e-9).unwrap();
    let label = classify_texture(&at_90.state, CLASSIFY_TOL);
    let s3 = &skyrmion_generators()[2];
    let s3_values: Vec<f64> = phase.iter().map(|f| expectation(&f.state, s3).unwrap()).collect();
    let s3_spread = s3_values.iter().map(|v| (v - s3_values[0]).abs()).fold(0.0, f64::max);
    vec![
        clause("data/fig1.bench is the built-in bench", bench == poincare_rotator_bench(), ""),
        below("|dφ/dΔψ_ph| = 2", rate_error(&phi, bench.sweeps[0].step, 2.0), 1e-9),
        below("|dθ/dΔψ_amp| = 4", rate_error(&chi, bench.sweeps[1].step, 4.0), 1e-9),
        below("rotator stays on the great circle", off_plane, 1e-9),
        clause("Δψ_ph = 90° is Néel-in", label == TextureLabel::NeelIn, label.to_string()),
        below("<S3> constant", s3_spread, 1e-10),
    ]
}

fn criterion_7() -> Vec<Clause> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut lp, mut trip) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let theta_p = rng.random_range(-PI..PI);
        let phi_t = rng.random_range(-PI..PI);
        let (n0, hbar) = (rng.random_range(0.5..5.0), rng.random_range(0.5..2.0));
        let t = state_to_torus(&torus_state(theta_p, phi_t).with_scale(n0, hbar)).unwrap();
        lp = lp.max((t.l_p - hbar * n0 / 2.0).abs());
        if theta_p.abs() > 1e-3 && PI - theta_p.abs() > 1e-3 {
            trip = trip.max(wrap_angle(t.theta_p - theta_p).abs()).max(wrap_angle(t.phi_t - phi_t).abs());
        }
    }
    let oam = |n: &str| oam_sphere(&named_state(n).unwrap()).coords;
    let both = max_diff(&oam("neel_out"), &[0.0, 0.0, 0.5]).max(max_diff(&oam("neel_in"), &[0.0, 0.0, 0.5]));
    let ov = overlap(&named_state("neel_out").unwrap(), &named_state("neel_in").unwrap()).norm();
    vec![
        below("l_p = ħN0/2 x100", lp, 1e-10),
        below("round trip", trip, 1e-9),
        below("Néel-out, Néel-in -> (0,0,1/2)", both, 1e-10),
        below("overlap 0", ov, 1e-12),
    ]
}

fn criterion_8() -> Vec<Clause> {
    let grid = TransverseGrid::new(512, 3.0, 1.0).unwrap();
    let field = |s: &CoherentState| StokesField::from_state(s, &grid);
    let mut out = Vec::new();
    let mut unit = 0.0f64;
    let mut oracle = 0.0f64;
    let mut report = Vec::new();
    for name in ["neel_out", "bloch_left", "bloch_right"] {
        let sf = field(&named_state(name).unwrap());
        let s = skyrmion_number(&sf, 3.0).unwrap();
        let o = solid_angle_skyrmion_number(&sf, 3.0).unwrap();
        unit = unit.max((s.abs() - 1.0).abs());
        oracle = oracle.max((s - o).abs());
        report.push(format!("{name} {s:.6}"));
    }
    out.push(clause(
        "unit charge",
        unit < 1e-3,
        format!("{} vs 1 ± 1e-3; disk covers 18/19 = {:.6}", report.join(", "), 18.0 / 19.0),
    ));
    out.push(below("solid-angle oracle", oracle, 1e-4));
    let neel = skyrmion_number(&field(&named_state("neel_out").unwrap()), 3.0).unwrap();
    let anti = skyrmion_number(&field(&named_state("antiskyrmion_h").unwrap()), 3.0).unwrap();
    out.push(below("s(anti) = -s(Néel-out)", (anti + neel).abs(), 1e-12));
    let bench = poincare_rotator_bench();
    let frames = sweep(&bench, &named_state("gaussian_h").unwrap(), &bench.sweeps[0]).unwrap();
    let along: Vec<f64> = frames.iter().map(|f| skyrmion_number(&field(&f.state), 3.0).unwrap()).collect();
    let spread = along.iter().map(|s| (s - along[0]).abs()).fold(0.0, f64::max);
    out.push(below("constant along phase sweep", spread, 1e-3));
    let zero = skyrmion_number(&field(&CoherentState::basis(2)), 3.0).unwrap();
    out.push(clause("s(|3>) = 0", zero == 0.0, format!("{zero:e}")));
    out
}

fn binary() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_photon-su6"));
    c.current_dir(manifest());
    c
}

fn criterion_9() -> Vec<Clause> {
    let mut corpus = Vec::new();
    for entry in fs::read_dir(manifest().join("data")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|x| x == "bench") {
            let text = fs::read_to_string(&path).unwrap();
            let stable = parse_bench(&text).map(|b| serialize_bench(&b) == text).unwrap_or(false);
            corpus.push((path.file_name().unwrap().to_string_lossy().into_owned(), stable));
        }
    }
    let unstable: Vec<&str> = corpus.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();

    let out = tempfile::tempdir().unwrap();
    let mut cases = 0;
    let mut wrong = Vec::new();
    let mut dir: Vec<PathBuf> =
        fs::read_dir(manifest().join("tests/malformed")).unwrap().map(|e| e.unwrap().path()).collect();
    dir.sort();
    for path in dir.iter().filter(|p| p.extension().is_some_and(|x| x == "bench")) {
        cases += 1;
        let text = fs::read_to_string(path).unwrap();
        let expect = text.lines().next().unwrap().trim_start_matches("# expect: ").to_string();
        let (code, pos) = expect.split_once(' ').unwrap();
        let o = binary().arg("--out").arg(out.path()).args(["bench", "run", "--bench"]).arg(path).output().unwrap();
        let stderr = String::from_utf8_lossy(&o.stderr);
        if o.status.code() != Some(2) || !stderr.contains(&format!(":{pos}: error[{code}]")) {
            wrong.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    vec![
        clause(
            "corpus byte-stable",
            unstable.is_empty() && corpus.len() >= 3,
            format!("{} files {unstable:?}", corpus.len()),
        ),
        clause("malformed -> diagnostic, exit 2", cases >= 10 && wrong.is_empty(), format!("{cases} inputs {wrong:?}")),
    ]
}

fn snapshot(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                files.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    files
}

fn criterion_10() -> Vec<Clause> {
    let recipes = fs::read_to_string(manifest().join("data/recipes.txt")).unwrap();
    let recipes: Vec<&str> = recipes.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let tmp = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    let mut failing = Vec::new();
    for (k, recipe) in recipes.iter().enumerate() {
        let mut runs = Vec::new();
        for run in ["a", "b"] {
            let dir = tmp.path().join(format!("{k}{run}"));
            let o = binary()
                .arg("--out")
                .arg(&dir)
                .args(["--seed", "11"])
                .args(recipe.split_whitespace())
                .output()
                .unwrap();
            if !o.status.success() {
                failing.push(recipe.to_string());
            }
            let files = if dir.exists() { snapshot(&dir) } else { BTreeMap::new() };
            runs.push((o.stdout, files));
            if dir.exists() {
                fs::remove_dir_all(&dir).unwrap();
            }
        }
        if runs[0] != runs[1] {
            differing.push(recipe.to_string());
        }
    }
    vec![
        clause("recipes succeed", failing.is_empty(), format!("{} recipes {failing:?}", recipes.len())),
        clause("byte-identical reruns", differing.is_empty(), format!("{differing:?}")),
    ]
}

fn main() {
    let criteria: [(u32, &str, u64, Check); 10] = [
        (1, "algebra suite", 10, criterion_1),
        (2, "skyrmionic reduction", 1, criterion_2),
        (3, "quantum-classical correspondence", 30, criterion_3),
        (4, "hypersphere radius", 10, criterion_4),
        (5, "named-state coordinates", 1, criterion_5),
        (6, "bench sweeps", 10, criterion_6),
        (7, "torus", 5, criterion_7),
        (8, "topology", 60, criterion_8),
        (9, "parser", 1, criterion_9),
        (10, "determinism", 120, criterion_10),
    ];
    let mut blocking = Vec::new();
    let mut passed = 0;
    for (n, title, budget, check) in criteria {
        let t = Instant::now();
        let clauses = check();
        let secs = t.elapsed().as_secs_f64();
        let ok = clauses.iter().all(|c| c.pass);
        passed += ok as u32;
        let timing =
            if secs > budget as f64 { format!("{secs:.1}s, over the {budget}s budget") } else { format!("{secs:.1}s") };
        println!("criterion {n:>2} {}: {title} ({timing})", if ok { "PASS" } else { "FAIL" });
        for c in &clauses {
            let known = UNATTAINABLE.contains(&(n, c.name));
            let mark = match (c.pass, known) {
                (true, _) => "ok  ",
                (false, true) => "FAIL (known unattainable)",
                (false, false) => "FAIL",
            };
            println!("    {mark} {}: {}", c.name, c.detail);
            if !c.pass && !known {
                blocking.push(format!("{n}: {}", c.name));
            }
        }
    }
    println!("acceptance: {passed}/10 criteria PASS");
    if !blocking.is_empty() {
        eprintln!("unexpected failures: {blocking:?}");
        std::process::exit(1);
    }
}
