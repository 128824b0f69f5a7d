use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use photon_su6::algebra::{self, restrict, GeneratorBasis, DIM};
use photon_su6::field::{self, MappingDescriptor, RadialProfile, StokesField, TransverseGrid};
use photon_su6::linalg::max_abs_diff;
use photon_su6::optics::{self, BenchDescription, InputSpec};
use photon_su6::state::{self, CoherentState, RotationAxis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bench::parse_bench;
use crate::error::{LabError, Result};
use crate::formats::{self, OutputDir};

#[derive(Debug, Parser)]
#[command(name = "photon-su6", version, about = "su(6) spin/OAM photon laboratory")]
pub struct Cli {
    /// Output directory for files and sidecars.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Samples per side of the transverse grid.
    #[arg(long, global = true, default_value_t = 256)]
    pub grid: usize,
    /// Grid half-width in waists.
    #[arg(long, global = true, default_value_t = 3.0)]
    pub extent: f64,
    /// Beam waist in grid length units.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub waist: f64,
    /// Seed for randomized verification.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Replace every verification threshold.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generator basis checks and exports.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCmd,
    },
    /// Coherent-state observables.
    State {
        #[command(subcommand)]
        action: StateCmd,
    },
    /// Simulate bench files.
    Bench {
        #[command(subcommand)]
        action: BenchCmd,
    },
    /// Transverse Stokes fields and topology.
    Field {
        #[command(subcommand)]
        action: FieldCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    /// Run the algebra invariant suite.
    Verify {
        /// Random samples for the Jacobi and correspondence checks.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Test hook: break the Hermiticity of generator N (1-based).
        #[arg(long, hide = true)]
        inject_non_hermitian: Option<usize>,
    },
    /// Write the basis, structure constants and adjoint matrices.
    Export,
}

#[derive(Debug, Subcommand)]
pub enum StateCmd {
    /// Print amplitudes, observables and sphere readings.
    Eval {
        /// Catalog name or JSON state file.
        #[arg(long)]
        state: String,
        /// Skyrmion, antiskyrmion, OAM and polarization sphere points.
        #[arg(long)]
        spheres: bool,
        /// Torus angles (an error object for states off the torus).
        #[arg(long)]
        torus: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BenchCmd {
    /// Camera-plane state of a bench.
    Run {
        /// Bench description file.
        #[arg(long)]
        bench: PathBuf,
        /// Also export the camera Stokes fields.
        #[arg(long)]
        fields: bool,
    },
    /// Run the bench sweeps and write trajectories.
    Sweep {
        /// Bench description file.
        #[arg(long)]
        bench: PathBuf,
        /// Only this sweep (by name).
        #[arg(long)]
        sweep: Option<String>,
        /// Also export per-frame Stokes fields.
        #[arg(long)]
        fields: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Profile {
    Linear,
    AreaPreserving,
}

#[derive(Debug, Subcommand)]
pub enum FieldCmd {
    /// Stokes fields, PGM images and the soup-bubble map of a state.
    Render {
        /// Catalog name or JSON state file.
        #[arg(long)]
        state: String,
        /// Integrate the skyrmion number over the disk.
        #[arg(long)]
        skyrmion_number: bool,
        /// Disk radius in waists.
        #[arg(long, default_value_t = 3.0)]
        disk: f64,
        /// Radial disk-to-sphere profile of the soup-bubble map.
        #[arg(long, value_enum, default_value_t = Profile::Linear)]
        profile: Profile,
        /// Polar bins of the soup-bubble map.
        #[arg(long, default_value_t = field::DEFAULT_THETA_BINS)]
        theta_bins: usize,
        /// Azimuthal bins of the soup-bubble map.
        #[arg(long, default_value_t = field::DEFAULT_PHI_BINS)]
        phi_bins: usize,
    },
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let ctx = Context { cli: &cli, argv: sanitized_argv(&args) };
    match ctx.dispatch() {
        Ok(report) => {
            let mut text = serde_json::to_string_pretty(&report).expect("json values serialize");
            text.push('\n');
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(Failure { error, report }) => {
            if let Some(report) = report {
                let mut text = serde_json::to_string_pretty(&report).expect("json values serialize");
                text.push('\n');
                let _ = stdout.write_all(text.as_bytes());
            }
            let _ = writeln!(stderr, "error: {error}");
            error.exit_code()
        }
    }
}

/// argv with the output directory replaced so sidecars do not depend on it.
fn sanitized_argv(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut hide_next = false;
    for (k, a) in args.iter().enumerate() {
        let a = a.to_string_lossy().into_owned();
        if k == 0 {
            out.push("photon-su6".to_string());
        } else if hide_next {
            out.push("<out>".to_string());
            hide_next = false;
        } else if a == "--out" {
            out.push(a);
            hide_next = true;
        } else if a.starts_with("--out=") {
            out.push("--out=<out>".to_string());
        } else {
            out.push(a);
        }
    }
    out
}

struct Failure {
    error: Box<LabError>,
    report: Option<Value>,
}

impl From<LabError> for Failure {
    fn from(error: LabError) -> Self {
        Failure { error: Box::new(error), report: None }
    }
}

impl From<photon_su6::Error> for Failure {
    fn from(e: photon_su6::Error) -> Self {
        LabError::from(e).into()
    }
}

struct Context<'a> {
    cli: &'a Cli,
    argv: Vec<String>,
}

/// One verification line.
struct Check {
    name: &'static str,
    residual: f64,
    tolerance: f64,
    note: Option<String>,
}

impl Check {
    fn pass(&self) -> bool {
        self.note.is_none() && self.residual <= self.tolerance
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "max_residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.pass(),
            "note": self.note,
        })
    }
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

impl Context<'_> {
    fn dispatch(&self) -> std::result::Result<Value, Failure> {
        match &self.cli.command {
            Command::Algebra { action: AlgebraCmd::Verify { samples, inject_non_hermitian } } => {
                self.algebra_verify(*samples, *inject_non_hermitian)
            }
            Command::Algebra { action: AlgebraCmd::Export } => Ok(self.algebra_export()?),
            Command::State { action: StateCmd::Eval { state, spheres, torus } } => {
                Ok(self.state_eval(state, *spheres, *torus)?)
            }
            Command::Bench { action: BenchCmd::Run { bench, fields } } => Ok(self.bench_run(bench, *fields)?),
            Command::Bench { action: BenchCmd::Sweep { bench, sweep, fields } } => {
                Ok(self.bench_sweep(bench, sweep.as_deref(), *fields)?)
            }
            Command::Field {
                action: FieldCmd::Render { state, skyrmion_number, disk, profile, theta_bins, phi_bins },
            } => {
                let profile = match profile {
                    Profile::Linear => RadialProfile::Linear,
                    Profile::AreaPreserving => RadialProfile::AreaPreserving,
                };
                Ok(self.field_render(state, *skyrmion_number, *disk, profile, *theta_bins, *phi_bins)?)
            }
        }
    }

    fn tol(&self, default: f64) -> f64 {
        self.cli.tolerance.unwrap_or(default)
    }

    fn grid(&self) -> Result<TransverseGrid> {
        Ok(TransverseGrid::new(self.cli.grid, self.cli.extent, self.cli.waist)?)
    }

    fn provenance(&self) -> Value {
        json!({
            "generator": concat!("photon-su6-lab ", env!("CARGO_PKG_VERSION")),
            "command": self.argv,
            "basis_order": algebra::BASIS_ORDER_VERSION,
            "config": {
                "grid": self.cli.grid,
                "extent": self.cli.extent,
                "waist": self.cli.waist,
                "seed": self.cli.seed,
                "tolerance": self.cli.tolerance,
            },
        })
    }

    fn output(&self) -> Result<OutputDir> {
        OutputDir::create(&self.cli.out, self.provenance())
    }

    fn algebra_verify(&self, samples: usize, inject: Option<usize>) -> std::result::Result<Value, Failure> {
        let mut basis = algebra::su6_basis();
        if let Some(l) = inject {
            if l == 0 || l > DIM {
                return Err(LabError::Usage(format!("generator index {l} outside 1..={DIM}")).into());
            }
            basis.generator_mut(l - 1)[(0, 1)] += Complex64::new(0.0, 0.5);
        }
        let checks = verify_checks(&basis, samples, self.cli.seed, |d| self.tol(d));
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass()).map(|c| c.name).collect();
        let report = json!({
            "seed": self.cli.seed,
            "samples": samples,
            "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
            "pass": failed.is_empty(),
        });
        if failed.is_empty() {
            Ok(report)
        } else {
            Err(Failure { error: Box::new(LabError::Verification(failed.join(", "))), report: Some(report) })
        }
    }

    fn algebra_export(&self) -> Result<Value> {
        let basis = algebra::su6_basis();
        let g = algebra::structure_constants(&basis)?;
        let adj = algebra::adjoint_matrices(&g);
        let mut out = self.output()?;
        out.write_json("basis.json", &formats::basis_json(&basis), json!({}))?;
        let zero = json!({ "omitted_below": formats::EXPORT_ZERO, "indices": "1-based" });
        out.write("structure_constants.csv", &formats::structure_constants_csv(&g)?, zero.clone())?;
        out.write("adjoint.csv", &formats::adjoint_csv(&adj)?, zero)?;
        Ok(json!({
            "files": out.files(),
            "nonzero_structure_constants": g.nonzero(formats::EXPORT_ZERO).count(),
        }))
    }

    fn state_eval(&self, spec: &str, spheres: bool, torus: bool) -> Result<Value> {
        let s = formats::resolve_state(spec, Path::new("."))?;
        let basis = algebra::su6_basis();
        let a = state::all_expectations(&s, &basis);
        let labels: Vec<String> = basis.labels().iter().map(|l| l.name()).collect();
        let mut report = json!({
            "state": spec,
            "amplitudes": formats::state_to_json(&s),
            "observables": { "labels": labels, "values": a.values },
            "hypersphere_norm": a.norm(),
            "hypersphere_radius": state::hypersphere_radius(&s),
            "texture": field::classify_texture(&s, field::CLASSIFY_TOL).to_string(),
        });
        if spheres {
            report["spheres"] = json!({
                "skyrmion": formats::sphere_json(&state::skyrmion_sphere(&s)),
                "antiskyrmion": formats::sphere_json(&state::antiskyrmion_sphere(&s)),
                "oam": formats::sphere_json(&state::oam_sphere(&s)),
                "polarization": formats::sphere_json(&state::polarization_sphere(&s)),
            });
        }
        if torus {
            report["torus"] = match state::state_to_torus(&s) {
                Ok(t) => formats::torus_json(&t),
                Err(e) => json!({ "error": e.to_string() }),
            };
        }
        Ok(report)
    }

    fn load_bench(&self, path: &Path) -> Result<(BenchDescription, CoherentState)> {
        let text = std::fs::read_to_string(path).map_err(LabError::io(path))?;
        let bench = parse_bench(&text).map_err(|source| LabError::Parse { path: path.to_path_buf(), source })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let input = match &bench.input {
            InputSpec::Named(n) => state::named_state(n)?,
            InputSpec::File(f) => formats::resolve_state(f, base)?,
        };
        Ok((bench, input))
    }

    fn export_fields(&self, out: &mut OutputDir, prefix: &str, s: &CoherentState) -> Result<()> {
        let grid = self.grid()?;
        let sf = StokesField::from_state(s, &grid);
        let meta = json!({ "grid": grid_json(&grid) });
        out.write(&format!("{prefix}stokes.csv"), &formats::stokes_csv(&sf)?, meta.clone())?;
        for (channel, bytes, lo, hi) in formats::stokes_pgms(&sf) {
            let mut m = meta.clone();
            m["scaling"] = json!({
                "channel": channel,
                "lo": lo,
                "hi": hi,
                "rule": "round(255 (v - lo) / (hi - lo)), clamped; top row is largest y",
            });
            out.write(&format!("{prefix}{channel}.pgm"), &bytes, m)?;
        }
        Ok(())
    }

    fn bench_run(&self, path: &Path, fields: bool) -> Result<Value> {
        let (bench, input) = self.load_bench(path)?;
        let out_state = optics::run_bench(&bench, &input)?;
        let mut out = self.output()?;
        let meta = json!({ "bench": bench.name });
        out.write_json("camera_state.json", &formats::state_to_json(&out_state), meta)?;
        if fields {
            self.export_fields(&mut out, "camera_", &out_state)?;
        }
        Ok(json!({
            "bench": bench.name,
            "state": formats::state_to_json(&out_state),
            "texture": field::classify_texture(&out_state, field::CLASSIFY_TOL).to_string(),
            "skyrmion_sphere": formats::sphere_json(&state::skyrmion_sphere(&out_state)),
            "antiskyrmion_sphere": formats::sphere_json(&state::antiskyrmion_sphere(&out_state)),
            "files": out.files(),
        }))
    }

    fn bench_sweep(&self, path: &Path, only: Option<&str>, fields: bool) -> Result<Value> {
        let (bench, input) = self.load_bench(path)?;
        let selected: Vec<(usize, &optics::SweepSpec)> =
            bench.sweeps.iter().enumerate().filter(|(_, s)| only.is_none() || s.name.as_deref() == only).collect();
        if selected.is_empty() {
            let names: Vec<String> = bench
                .sweeps
                .iter()
                .enumerate()
                .map(|(k, s)| s.name.clone().unwrap_or_else(|| format!("#{}", k + 1)))
                .collect();
            return Err(LabError::Usage(match only {
                Some(n) => format!("no sweep named '{n}' (available: {})", names.join(", ")),
                None => "bench defines no sweeps".into(),
            }));
        }
        let mut out = self.output()?;
        let mut summary = Vec::new();
        for (k, spec) in selected {
            let tag = spec.name.clone().unwrap_or_else(|| format!("sweep{}", k + 1));
            let frames = optics::sweep(&bench, &input, spec)?;
            let meta = json!({
                "bench": bench.name,
                "sweep": { "name": tag, "element": spec.element, "from": spec.from, "to": spec.to, "step": spec.step,
                           "record": spec.record.iter().map(|r| r.keyword()).collect::<Vec<_>>() },
                "angles": "degrees for parameter, radians for theta_p and phi_t",
            });
            out.write(&format!("trajectory_{tag}.csv"), &formats::trajectory_csv(&frames, &spec.record)?, meta)?;
            if fields {
                for (f, frame) in frames.iter().enumerate() {
                    self.export_fields(&mut out, &format!("{tag}_frame{f:03}_"), &frame.state)?;
                }
            }
            summary.push(json!({
                "sweep": tag,
                "frames": frames.len(),
                "labels": frames
                    .iter()
                    .map(|f| json!([f.parameter, field::classify_texture(&f.state, field::CLASSIFY_TOL).to_string()]))
                    .collect::<Vec<_>>(),
            }));
        }
        Ok(json!({ "bench": bench.name, "sweeps": summary, "files": out.files() }))
    }

    fn field_render(
        &self,
        spec: &str,
        skyrmion_number: bool,
        disk_waists: f64,
        profile: RadialProfile,
        theta_bins: usize,
        phi_bins: usize,
    ) -> Result<Value> {
        let s = formats::resolve_state(spec, Path::new("."))?;
        let grid = self.grid()?;
        let disk = disk_waists * grid.waist();
        let sf = StokesField::from_state(&s, &grid);
        let mapping = MappingDescriptor { disk_radius: disk, profile };
        let map = field::soup_bubble(&sf, mapping, theta_bins, phi_bins)?;
        let number = if skyrmion_number { Some(field::skyrmion_number(&sf, disk)?) } else { None };

        let mut out = self.output()?;
        self.export_fields(&mut out, "", &s)?;
        let map_meta = json!({
            "grid": grid_json(&grid),
            "mapping": { "disk_radius": disk, "profile": profile.as_str(), "theta_bins": theta_bins, "phi_bins": phi_bins },
        });
        out.write("texture_map.csv", &formats::texture_map_csv(&map)?, map_meta)?;
        let mut report = json!({
            "state": spec,
            "grid": grid_json(&grid),
            "purity_residual": sf.purity_residual(),
            "empty_sphere_bins": map.empty_bins(),
            "files": out.files(),
        });
        if let Some(value) = number {
            report["skyrmion_number"] = json!({
                "value": value,
                "disk_radius": disk,
                "method": "plaquette-centred finite differences",
            });
        }
        Ok(report)
    }
}

fn grid_json(g: &TransverseGrid) -> Value {
    json!({ "size": g.size(), "extent": g.extent(), "waist": g.waist(), "spacing": g.spacing() })
}

fn verify_checks(basis: &GeneratorBasis, samples: usize, seed: u64, tol: impl Fn(f64) -> f64) -> Vec<Check> {
    let mut checks = Vec::new();
    let (h, _) = basis.hermiticity();
    checks.push(Check { name: "hermiticity", residual: h, tolerance: tol(1e-12), note: None });
    let (t, _) = basis.tracelessness();
    checks.push(Check { name: "tracelessness", residual: t, tolerance: tol(1e-12), note: None });
    let (o, _) = basis.orthonormality();
    checks.push(Check { name: "trace_orthonormality", residual: o, tolerance: tol(1e-12), note: None });
    let counts = basis.family_counts();
    checks.push(Check {
        name: "family_counts",
        residual: 0.0,
        tolerance: 0.0,
        note: (counts != (3, 8, 24)).then(|| format!("found {counts:?}")),
    });

    let g = match algebra::structure_constants(basis) {
        Ok(g) => g,
        Err(e) => {
            checks.push(Check {
                name: "structure_constants",
                residual: f64::INFINITY,
                tolerance: 0.0,
                note: Some(e.to_string()),
            });
            return checks;
        }
    };
    checks.push(Check { name: "antisymmetry", residual: g.antisymmetry_residual(), tolerance: tol(1e-12), note: None });
    checks.push(Check {
        name: "commutator_closure",
        residual: g.closure_residual(basis),
        tolerance: tol(1e-10),
        note: None,
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jacobi = (0..samples)
        .map(|_| {
            let (l, m, n) = (rng.random_range(0..DIM), rng.random_range(0..DIM), rng.random_range(0..DIM));
            algebra::jacobi_residual(basis, l, m, n)
        })
        .fold(0.0, f64::max);
    checks.push(Check { name: "jacobi", residual: jacobi, tolerance: tol(1e-9), note: None });

    let reduction = [(algebra::skyrmion_generators(), [2usize, 3]), (algebra::antiskyrmion_generators(), [2, 4])]
        .iter()
        .flat_map(|(triple, support)| {
            let pauli = algebra::pauli_matrices();
            triple.iter().zip(pauli).map(move |(m, p)| max_abs_diff(&restrict(m, support), &p)).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    checks.push(Check { name: "su2_reduction", residual: reduction, tolerance: tol(0.0), note: None });

    let adj = algebra::adjoint_matrices(&g);
    let mut corr = 0.0f64;
    let mut radius = 0.0f64;
    let mut note = None;
    for k in 0..samples {
        let s = random_state(&mut rng);
        let dphi = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI) * 2.0;
        // every fifth sample rotates about an arbitrary direction
        let axis = if k % 5 == 4 {
            RotationAxis::Direction(random_direction(&mut rng))
        } else {
            RotationAxis::Generator(rng.random_range(0..DIM))
        };
        match state::correspondence_check(&s, basis, &adj, &axis, dphi) {
            Ok(r) => corr = corr.max(r),
            Err(e) => {
                note = Some(e.to_string());
                break;
            }
        }
        radius = radius.max((state::all_expectations(&s, basis).norm() - state::hypersphere_radius(&s)).abs());
    }
    checks.push(Check { name: "quantum_classical_correspondence", residual: corr, tolerance: tol(1e-9), note });
    checks.push(Check { name: "hypersphere_radius", residual: radius, tolerance: tol(1e-10), note: None });
    checks
}
