//! Experiment runner for the arrowhead solver toolkit.
//!
//! Every subcommand emits CSV with the shared header
//! `parameters,N,time_factor_s,time_solve_s,iters,error`. The `parameters`
//! cell packs the run configuration as `key=value` pairs separated by
//! semicolons; `N` is the per-axis number of unknowns. Timing cells are
//! filled only by the scaling subcommands (median of 5 repetitions after one
//! warmup on a monotonic clock) — all other subcommands leave them empty so
//! their output is byte-identical across runs with the same seed and
//! `--threads 1`.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arrowhead::{
    analysis_2d, assemble_operators, assemble_rhs_1d, graded_mesh, hatbubble_to_values,
    lemma_spectrum_bounds, sylvester_residual, BoundaryCondition, BurgersState, Mat, Mesh1D,
    PcgConfig, ScreenedPoisson2D, Space1D, SpaceSpec, TransformPlan, VariableCoefficientSolver,
};

#[derive(Parser)]
#[command(
    name = "arrowhead",
    version,
    about = "Sparse hp-element solver experiments: factorisation, \
             alternating-direction solves, and time stepping, reported as CSV"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a 1D screened-Poisson problem and report the solve residual
    Solve1d(Solve1dArgs),
    /// Solve a 2D screened-Poisson problem (manufactured or file-based load)
    Solve2d(Solve2dArgs),
    /// Time 1D factorise+solve over a degree sweep at fixed element count
    Scaling1d(Scaling1dArgs),
    /// Time 2D setup and alternating-direction solves over a degree sweep
    Scaling2d(Scaling2dArgs),
    /// Step the viscous Burgers splitting and report the boundary trace
    Burgers(BurgersArgs),
    /// Preconditioned CG iteration counts for the log-potential problem
    PcgTable(PcgTableArgs),
    /// Dense spectra of mass-vs-shifted-Laplacian pencils against the
    /// analytic interval
    SpectrumCheck(SpectrumCheckArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Output CSV path; '-' writes to stdout
    #[arg(long, default_value = "-")]
    output: String,
    /// Seed for randomised inputs
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker thread count (falls back to the ARROWHEAD_THREADS environment
    /// variable, then to all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BcArg {
    Dirichlet,
    Full,
    LeftDirichlet,
    RightDirichlet,
}

impl From<BcArg> for BoundaryCondition {
    fn from(b: BcArg) -> Self {
        match b {
            BcArg::Dirichlet => BoundaryCondition::Dirichlet,
            BcArg::Full => BoundaryCondition::Full,
            BcArg::LeftDirichlet => BoundaryCondition::LeftDirichlet,
            BcArg::RightDirichlet => BoundaryCondition::RightDirichlet,
        }
    }
}

fn bc_name(bc: BoundaryCondition) -> &'static str {
    match bc {
        BoundaryCondition::Dirichlet => "dirichlet",
        BoundaryCondition::Full => "full",
        BoundaryCondition::LeftDirichlet => "left-dirichlet",
        BoundaryCondition::RightDirichlet => "right-dirichlet",
    }
}

impl std::fmt::Display for BcArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(bc_name((*self).into()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Rhs1dArg {
    /// f(x) = sin(πx)
    Sin,
    /// f(x) = 1
    One,
}

#[derive(Clone, Copy, ValueEnum)]
enum ManufacturedArg {
    /// u(x, y) = sin(πx)·sin(πy) with the matching load
    Sin,
}

#[derive(Clone, Copy, ValueEnum)]
enum IcArg {
    /// 1 on the centred block of elements, 0 elsewhere (discontinuous)
    Indicator,
    /// 0.5·sin(πx)·sin(πy)
    Sin,
}

#[derive(Args)]
struct Solve1dArgs {
    /// Number of mesh elements on (-1, 1)
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Polynomial degree per element
    #[arg(long, default_value_t = 16)]
    p: usize,
    /// Screening parameter ω in -u'' + ω²u = f
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Boundary condition (which endpoint hats are dropped)
    #[arg(long, value_enum, default_value_t = BcArg::Dirichlet)]
    bc: BcArg,
    /// Right-hand side
    #[arg(long, value_enum, default_value_t = Rhs1dArg::Sin)]
    rhs: Rhs1dArg,
    /// JSON space description {"breakpoints": [...], "degree": .., "bc": ".."}
    /// overriding --n/--p/--bc
    #[arg(long, conflicts_with_all = ["n", "p", "bc"])]
    space_json: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct Solve2dArgs {
    /// Number of mesh elements per axis on (-1, 1)
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Polynomial degree per element
    #[arg(long, default_value_t = 20)]
    p: usize,
    /// Screening parameter ω in -Δu + ω²u = f
    #[arg(long, default_value_t = 0.0)]
    omega: f64,
    /// Boundary condition on both axes
    #[arg(long, value_enum, default_value_t = BcArg::Dirichlet)]
    bc: BcArg,
    /// Alternating-direction tolerance
    #[arg(long, default_value = "1e-10")]
    eps: f64,
    /// Manufactured solution; reports the max grid error against it
    #[arg(long, value_enum)]
    manufactured: Option<ManufacturedArg>,
    /// Load as row-major grid values on the (p+1)-point transform grid;
    /// reports the relative operator residual
    #[arg(long, conflicts_with = "manufactured")]
    rhs_file: Option<PathBuf>,
    /// JSON space description overriding --n/--p/--bc on both axes
    #[arg(long, conflicts_with_all = ["n", "p", "bc"])]
    space_json: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct Scaling1dArgs {
    /// Number of mesh elements (fixed across the sweep)
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// First degree of the doubling sweep
    #[arg(long, default_value_t = 8)]
    p_min: usize,
    /// Last degree of the doubling sweep
    #[arg(long, default_value_t = 4096)]
    p_max: usize,
    /// Screening parameter ω
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Boundary condition
    #[arg(long, value_enum, default_value_t = BcArg::Dirichlet)]
    bc: BcArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct Scaling2dArgs {
    /// Number of mesh elements per axis (fixed across the sweep)
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// First degree of the doubling sweep
    #[arg(long, default_value_t = 4)]
    p_min: usize,
    /// Last degree of the doubling sweep
    #[arg(long, default_value_t = 64)]
    p_max: usize,
    /// Screening parameter ω
    #[arg(long, default_value_t = 0.0)]
    omega: f64,
    /// Boundary condition on both axes
    #[arg(long, value_enum, default_value_t = BcArg::Dirichlet)]
    bc: BcArg,
    /// Alternating-direction tolerance
    #[arg(long, default_value = "1e-8")]
    eps: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BurgersArgs {
    /// Number of mesh elements per axis on (-1, 1)
    #[arg(long, default_value_t = 9)]
    n: usize,
    /// Polynomial degree per element
    #[arg(long, default_value_t = 12)]
    p: usize,
    /// Viscosity ε in u_t = ε Δu - u u_x
    #[arg(long, default_value_t = 0.1)]
    eps_visc: f64,
    /// Time step δt
    #[arg(long, default_value = "1e-3")]
    dt: f64,
    /// Number of steps to take
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Tolerance of the implicit half-step solves
    #[arg(long, default_value = "1e-8")]
    adi_tol: f64,
    /// Initial condition
    #[arg(long, value_enum, default_value_t = IcArg::Indicator)]
    ic: IcArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct PcgTableArgs {
    /// Mesh grading depths (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    m: Vec<usize>,
    /// Polynomial degrees (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    p: Vec<usize>,
    /// Relative residual tolerance of the outer CG iteration
    #[arg(long, default_value = "1e-8")]
    rel_tol: f64,
    /// Tolerance of the alternating-direction preconditioner
    #[arg(long, default_value = "1e-4")]
    adi_tol: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SpectrumCheckArgs {
    /// Element counts (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
    n: Vec<usize>,
    /// Polynomial degrees (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "3,5,8")]
    p: Vec<usize>,
    /// Screening parameters (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "0,1,10")]
    omega: Vec<f64>,
    /// Boundary conditions (comma separated)
    #[arg(long, value_enum, value_delimiter = ',', default_value = "dirichlet,full")]
    bc: Vec<BcArg>,
    #[command(flatten)]
    common: CommonArgs,
}

/// One output row; `None` cells print empty.
struct Row {
    parameters: String,
    n: usize,
    time_factor_s: Option<f64>,
    time_solve_s: Option<f64>,
    iters: Option<usize>,
    error: Option<f64>,
}

fn fmt_opt_f(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_default()
}

fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from("parameters,N,time_factor_s,time_solve_s,iters,error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.parameters,
            r.n,
            fmt_opt_f(r.time_factor_s),
            fmt_opt_f(r.time_solve_s),
            r.iters.map(|i| i.to_string()).unwrap_or_default(),
            fmt_opt_f(r.error),
        ));
    }
    out
}

fn write_output(path: &str, rows: &[Row]) -> Result<()> {
    let text = render_csv(rows);
    if path == "-" {
        print!("{text}");
    } else {
        std::fs::write(path, text).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn init_threads(flag: Option<usize>) -> Result<()> {
    let n = flag.or_else(|| {
        std::env::var("ARROWHEAD_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = n {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("initialising the worker pool")?;
    }
    Ok(())
}

/// Median of `reps` timed calls after one warmup.
fn median_time(reps: usize, mut f: impl FnMut()) -> f64 {
    f();
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let t0 = Instant::now();
            f();
            t0.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times[times.len() / 2]
}

fn load_space(path: &PathBuf) -> Result<Space1D> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = SpaceSpec::from_json(&text)?;
    Ok(spec.build()?)
}

fn square_space(
    json: &Option<PathBuf>,
    n: usize,
    p: usize,
    bc: BcArg,
) -> Result<(Space1D, String)> {
    match json {
        Some(path) => {
            let space = load_space(path)?;
            let tag = format!(
                "space=json;n={};p={};bc={}",
                space.n_elements(),
                space.degree(),
                bc_name(space.bc())
            );
            Ok((space, tag))
        }
        None => {
            let mesh = Mesh1D::uniform(-1.0, 1.0, n)?;
            let space = Space1D::new(mesh, p, bc.into())?;
            Ok((space, format!("n={n};p={p};bc={bc}")))
        }
    }
}

fn run_solve1d(args: &Solve1dArgs) -> Result<Vec<Row>> {
    let (space, tag) = square_space(&args.space_json, args.n, args.p, args.bc)?;
    let p = space.degree();
    let ops = assemble_operators(&space, args.omega)?;
    let factor = ops.shifted.reverse_cholesky()?;

    let plan = TransformPlan::new(space.mesh().clone(), p + 1)?;
    let f = |x: f64| match args.rhs {
        Rhs1dArg::Sin => (PI * x).sin(),
        Rhs1dArg::One => 1.0,
    };
    let vals: Vec<f64> = plan.grid().iter().map(|&x| f(x)).collect();
    let f_leg = plan.analysis_1d(&vals)?;
    let b = assemble_rhs_1d(&space, &f_leg)?;

    let mut x = b.clone();
    factor.solve(&mut x);
    let ax = ops.shifted.matvec(&x);
    let num: f64 = ax
        .iter()
        .zip(&b)
        .map(|(a, v)| (a - v) * (a - v))
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();

    let rhs_name = match args.rhs {
        Rhs1dArg::Sin => "sin",
        Rhs1dArg::One => "one",
    };
    Ok(vec![Row {
        parameters: format!("solve1d;{tag};omega={};rhs={rhs_name}", args.omega),
        n: space.dim(),
        time_factor_s: None,
        time_solve_s: None,
        iters: None,
        error: Some(num / den),
    }])
}

fn read_grid_csv(path: &PathBuf, rows: usize, cols: usize) -> Result<Mat> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut data = Vec::with_capacity(rows * cols);
    let mut n_lines = 0usize;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        n_lines += 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols {
            bail!(
                "line {}: expected {cols} grid values per row, found {}",
                i + 1,
                fields.len()
            );
        }
        for f in fields {
            data.push(
                f.trim()
                    .parse::<f64>()
                    .with_context(|| format!("line {}: bad number '{f}'", i + 1))?,
            );
        }
    }
    if n_lines != rows {
        bail!("expected {rows} grid rows, found {n_lines}");
    }
    Ok(Mat::from_row_slice(rows, cols, &data))
}

fn run_solve2d(args: &Solve2dArgs) -> Result<Vec<Row>> {
    let (space, tag) = square_space(&args.space_json, args.n, args.p, args.bc)?;
    let p = space.degree();
    let solver = ScreenedPoisson2D::new(&space, &space, args.omega, args.eps)?;
    let plan = TransformPlan::new(space.mesh().clone(), p + 1)?;

    let manufactured = match (args.manufactured, &args.rhs_file) {
        (None, None) => Some(ManufacturedArg::Sin),
        (m, _) => m,
    };

    let (f_vals, load_name): (Mat, &str) = match (&manufactured, &args.rhs_file) {
        (Some(ManufacturedArg::Sin), _) => {
            let scale = 2.0 * PI * PI + args.omega * args.omega;
            let mut f = Mat::zeros(plan.n_points(), plan.n_points());
            for (i, &x) in plan.grid().iter().enumerate() {
                for (j, &y) in plan.grid().iter().enumerate() {
                    f[(i, j)] = scale * (PI * x).sin() * (PI * y).sin();
                }
            }
            (f, "sin")
        }
        (None, Some(path)) => (
            read_grid_csv(path, plan.n_points(), plan.n_points())?,
            "file",
        ),
        (None, None) => unreachable!(),
    };

    let f_leg = analysis_2d(&plan, &plan, &f_vals)?;
    let g = solver.load_from_legendre(&f_leg)?;
    let u = solver.solve_load(&g);

    let error = if manufactured.is_some() {
        let eval_plan = TransformPlan::new(space.mesh().clone(), p + 6)?;
        let vals = hatbubble_to_values(
            &eval_plan,
            &eval_plan,
            &u,
            &solver.ops_x.conversion,
            &solver.ops_y.conversion,
        )?;
        let mut err: f64 = 0.0;
        for (i, &x) in eval_plan.grid().iter().enumerate() {
            for (j, &y) in eval_plan.grid().iter().enumerate() {
                err = err.max((vals[(i, j)] - (PI * x).sin() * (PI * y).sin()).abs());
            }
        }
        err
    } else {
        let b = solver.ops_y.shifted.scaled(-1.0);
        sylvester_residual(
            &solver.ops_x.shifted,
            &b,
            &solver.ops_y.mass,
            &solver.ops_x.mass,
            &u,
            &g,
        )
    };

    Ok(vec![Row {
        parameters: format!(
            "solve2d;{tag};omega={};eps={:e};load={load_name}",
            args.omega, args.eps
        ),
        n: space.dim(),
        time_factor_s: None,
        time_solve_s: None,
        iters: Some(solver.plan().iterations()),
        error: Some(error),
    }])
}

fn degree_sweep(p_min: usize, p_max: usize) -> Result<Vec<usize>> {
    if p_min < 2 {
        bail!("--p-min must be at least 2");
    }
    if p_max < p_min {
        bail!("--p-max ({p_max}) must not be below --p-min ({p_min})");
    }
    let mut ps = Vec::new();
    let mut p = p_min;
    while p <= p_max {
        ps.push(p);
        p *= 2;
    }
    Ok(ps)
}

fn run_scaling1d(args: &Scaling1dArgs) -> Result<Vec<Row>> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
    let mut rows = Vec::new();
    for p in degree_sweep(args.p_min, args.p_max)? {
        let mesh = Mesh1D::uniform(-1.0, 1.0, args.n)?;
        let space = Space1D::new(mesh, p, args.bc.into())?;
        let ops = assemble_operators(&space, args.omega)?;
        let a = &ops.shifted;
        let b: Vec<f64> = (0..a.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let t_factor = median_time(5, || {
            std::hint::black_box(a.reverse_cholesky().unwrap());
        });
        let factor = a.reverse_cholesky()?;
        let mut x = b.clone();
        let t_solve = median_time(5, || {
            x.copy_from_slice(&b);
            factor.solve(&mut x);
            std::hint::black_box(&x);
        });
        let ax = a.matvec(&x);
        let num: f64 = ax
            .iter()
            .zip(&b)
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            .sqrt();
        let den: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();

        rows.push(Row {
            parameters: format!(
                "scaling1d;n={};p={p};omega={};bc={}",
                args.n, args.omega, args.bc
            ),
            n: space.dim(),
            time_factor_s: Some(t_factor),
            time_solve_s: Some(t_solve),
            iters: None,
            error: Some(num / den),
        });
    }
    Ok(rows)
}

fn run_scaling2d(args: &Scaling2dArgs) -> Result<Vec<Row>> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
    let mut rows = Vec::new();
    for p in degree_sweep(args.p_min, args.p_max)? {
        let mesh = Mesh1D::uniform(-1.0, 1.0, args.n)?;
        let space = Space1D::new(mesh, p, args.bc.into())?;

        let t_factor = median_time(5, || {
            std::hint::black_box(
                ScreenedPoisson2D::new(&space, &space, args.omega, args.eps).unwrap(),
            );
        });
        let solver = ScreenedPoisson2D::new(&space, &space, args.omega, args.eps)?;

        // random smooth load with decaying coefficient blocks
        let n = args.n;
        let mut f_leg = Mat::zeros((p + 1) * n, (p + 1) * n);
        for i in 0..f_leg.nrows() {
            for j in 0..f_leg.ncols() {
                f_leg[(i, j)] = rng.gen_range(-1.0..1.0) * 0.8f64.powi((i / n + j / n) as i32);
            }
        }
        let g = solver.load_from_legendre(&f_leg)?;
        let mut u = Mat::zeros(0, 0);
        let t_solve = median_time(5, || {
            u = solver.solve_load(&g);
        });

        let b = solver.ops_y.shifted.scaled(-1.0);
        let res = sylvester_residual(
            &solver.ops_x.shifted,
            &b,
            &solver.ops_y.mass,
            &solver.ops_x.mass,
            &u,
            &g,
        );

        rows.push(Row {
            parameters: format!(
                "scaling2d;n={};p={p};omega={};bc={};eps={:e}",
                args.n, args.omega, args.bc, args.eps
            ),
            n: space.dim(),
            time_factor_s: Some(t_factor),
            time_solve_s: Some(t_solve),
            iters: Some(solver.plan().iterations()),
            error: Some(res),
        });
    }
    Ok(rows)
}

fn run_burgers(args: &BurgersArgs) -> Result<Vec<Row>> {
    let mesh = Mesh1D::uniform(-1.0, 1.0, args.n)?;
    let space = Space1D::new(mesh.clone(), args.p, BoundaryCondition::Dirichlet)?;
    let (n, p) = (args.n, args.p);

    let (u0, ic_name) = match args.ic {
        IcArg::Indicator => {
            let mut u0 = Mat::zeros((p + 1) * n, (p + 1) * n);
            let centred: Vec<bool> = (0..n)
                .map(|e| {
                    let (a, b) = mesh.element(e);
                    (0.5 * (a + b)).abs() < 1.0 / 3.0
                })
                .collect();
            for ex in 0..n {
                for ey in 0..n {
                    if centred[ex] && centred[ey] {
                        u0[(ex, ey)] = 1.0;
                    }
                }
            }
            (u0, "indicator")
        }
        IcArg::Sin => {
            let plan = TransformPlan::new(mesh.clone(), p + 1)?;
            let mut vals = Mat::zeros(plan.n_points(), plan.n_points());
            for (i, &x) in plan.grid().iter().enumerate() {
                for (j, &y) in plan.grid().iter().enumerate() {
                    vals[(i, j)] = 0.5 * (PI * x).sin() * (PI * y).sin();
                }
            }
            (analysis_2d(&plan, &plan, &vals)?, "sin")
        }
    };

    let mut state = BurgersState::new(&space, &space, u0, args.eps_visc, args.dt, args.adi_tol)?;
    let parameters = format!(
        "burgers;n={n};p={p};eps={};dt={:e};ic={ic_name}",
        args.eps_visc, args.dt
    );
    let mut rows = Vec::new();
    for step in 1..=args.steps {
        state.step()?;
        rows.push(Row {
            parameters: parameters.clone(),
            n: space.dim(),
            time_factor_s: None,
            time_solve_s: None,
            iters: Some(step),
            error: Some(state.boundary_max()),
        });
    }
    Ok(rows)
}

fn run_pcg_table(args: &PcgTableArgs) -> Result<Vec<Row>> {
    let config = PcgConfig {
        rel_tol: args.rel_tol,
        precond_tol: args.adi_tol,
        ..PcgConfig::default()
    };
    let mut rows = Vec::new();
    for &m in &args.m {
        for &p in &args.p {
            let mesh = graded_mesh(m)?;
            let space = Space1D::new(mesh, p, BoundaryCondition::Dirichlet)?;
            let solver = VariableCoefficientSolver::new(
                &space,
                &space,
                |x, y| -5.0 * (x * x + y * y).ln(),
                args.adi_tol,
            )?;
            let n = space.n_elements();
            let mut f = Mat::zeros((p + 1) * n, (p + 1) * n);
            for e in 0..n {
                for d in 0..n {
                    f[(e, d)] = 1.0;
                }
            }
            let (u, iters) = solver.solve(&f, &config)?;

            // residual check against the unweighted Laplacian load
            let lap = ScreenedPoisson2D::new(&space, &space, 0.0, args.adi_tol)?;
            let rhs = lap.load_from_legendre(&f)?;
            let residual = (solver.apply_operator(&u)? - &rhs).norm() / rhs.norm();

            rows.push(Row {
                parameters: format!(
                    "pcg-table;m={m};p={p};rel_tol={:e};adi_tol={:e}",
                    args.rel_tol, args.adi_tol
                ),
                n: space.dim(),
                time_factor_s: None,
                time_solve_s: None,
                iters: Some(iters),
                error: Some(residual),
            });
        }
    }
    Ok(rows)
}

/// Eigenvalues of the symmetric pencil (A, D) via the Cholesky congruence.
fn pencil_eigs(a: &nalgebra::DMatrix<f64>, d: &nalgebra::DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = nalgebra::Cholesky::new(d.clone())
        .context("pencil weight matrix is not positive definite")?;
    let half = chol.l().solve_lower_triangular(a).unwrap();
    let reduced = chol.l().solve_lower_triangular(&half.transpose()).unwrap();
    let sym = 0.5 * (reduced.clone() + reduced.transpose());
    let mut eigs: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

fn run_spectrum_check(args: &SpectrumCheckArgs) -> Result<Vec<Row>> {
    const DENSE_CAP: usize = 600;
    let mut rows = Vec::new();
    for &n in &args.n {
        for &p in &args.p {
            for &omega in &args.omega {
                for &bc in &args.bc {
                    if bc != BcArg::Dirichlet && omega == 0.0 {
                        continue; // no analytic cap without screening
                    }
                    let mesh = Mesh1D::uniform(-1.0, 1.0, n)?;
                    let space = Space1D::new(mesh, p, bc.into())?;
                    if space.dim() > DENSE_CAP {
                        bail!(
                            "pencil dimension {} exceeds the dense check cap {DENSE_CAP}; \
                             reduce --n or --p",
                            space.dim()
                        );
                    }
                    let ops = assemble_operators(&space, omega)?;
                    let bound = lemma_spectrum_bounds(
                        space.mesh().h_min(),
                        p,
                        omega,
                        bc.into(),
                        space.mesh().length(),
                    )?;
                    let eigs =
                        pencil_eigs(&ops.mass.to_dense(), &ops.shifted.to_dense())?;
                    let lo = *eigs.first().unwrap();
                    let hi = *eigs.last().unwrap();
                    let violation = ((bound.lo - lo) / bound.lo)
                        .max((hi - bound.hi) / bound.hi)
                        .max(0.0);
                    rows.push(Row {
                        parameters: format!("spectrum-check;n={n};p={p};omega={omega};bc={bc}"),
                        n: space.dim(),
                        time_factor_s: None,
                        time_solve_s: None,
                        iters: None,
                        error: Some(violation),
                    });
                }
            }
        }
    }
    if rows.is_empty() {
        bail!("no admissible (n, p, omega, bc) combinations requested");
    }
    Ok(rows)
}

fn run(cli: Cli) -> Result<()> {
    let (common, rows) = match &cli.command {
        Command::Solve1d(a) => {
            init_threads(a.common.threads)?;
            (&a.common, run_solve1d(a)?)
        }
        Command::Solve2d(a) => {
            init_threads(a.common.threads)?;
            (&a.common, run_solve2d(a)?)
        }
        Command::Scaling1d(a) => {
            init_threads(a.common.threads)?;
            (&a.common, run_scaling1d(a)?)
        }
        Command::Scaling2d(a) => {
            init_threads(a.common.threads)?;
            (&a.common, run_scaling2d(a)?)
        }
        Command::Burgers(a) => {
            init_threads(a.common.threads)?;
            (&a.common, run_burgers(a)?)
        }
        Command::PcgTable(a) => {
            init_threads(a.common.threads)?;
            (&a.common, run_pcg_table(a)?)
        }
        Command::SpectrumCheck(a) => {
            init_threads(a.common.threads)?;
            (&a.common, run_spectrum_check(a)?)
        }
    };
    write_output(&common.output, &rows)
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
