//! Command-line front end: dispatches to the worked instances and writes
//! CSV artifacts paired with JSON run manifests.

use clap::{Args, Parser, Subcommand};
use rhlab::c64;
use rhlab::manifest::{CsvTable, RunManifest};
use rhlab::Complex64;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "rhlab", version, about = "Numerical Riemann-Hilbert problems")]
struct Cli {
    /// Output directory for CSV and manifest files.
    #[arg(long, default_value = ".", global = true)]
    out: PathBuf,
    /// Worker threads (default: all cores, or RHLAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct XGrid {
    #[arg(long, allow_hyphen_values = true)]
    xmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    xmax: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 33)]
    n: usize,
}

impl XGrid {
    fn points(&self) -> Vec<f64> {
        if self.n <= 1 {
            return vec![self.xmin];
        }
        (0..self.n)
            .map(|j| self.xmin + (self.xmax - self.xmin) * j as f64 / (self.n - 1) as f64)
            .collect()
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Airy function by contour quadrature vs its asymptotic series.
    Airy {
        #[command(flatten)]
        grid: XGrid,
        /// Series truncation order.
        #[arg(long, default_value_t = 5)]
        terms: usize,
    },
    /// Painlevé II: RHP solve, ODE continuation, connection asymptotics.
    Pii {
        #[command(subcommand)]
        sub: Option<PiiSub>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
        q: f64,
        /// Stokes parameter p (default -q).
        #[arg(long, allow_hyphen_values = true)]
        p: Option<f64>,
        /// Stokes parameter r (default 0).
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
        xmin: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 6.0)]
        xmax: f64,
        #[arg(long, default_value_t = 17)]
        n: usize,
        /// Collocation nodes per ray.
        #[arg(long, default_value_t = 110)]
        nodes: usize,
    },
    /// MKdV field from reflection data vs the split-step oracle.
    Mkdv {
        #[command(flatten)]
        grid: XGrid,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Gaussian amplitude of the built-in initial datum.
        #[arg(long, default_value_t = 0.3)]
        amplitude: f64,
        /// CSV file (x, re, im) with the initial datum on a uniform grid.
        #[arg(long)]
        q0_file: Option<PathBuf>,
    },
    /// Defocusing NLS field from reflection data vs the split-step oracle.
    Nls {
        #[command(flatten)]
        grid: XGrid,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = 0.3)]
        amplitude: f64,
        #[arg(long)]
        q0_file: Option<PathBuf>,
    },
    /// Orthogonal polynomials: recurrence coefficients and RHP residuals.
    Opoly {
        /// Weight: hermite | quartic.
        #[arg(long, default_value = "hermite")]
        weight: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Toeplitz determinants, the Szegő limit and the lens deformation.
    Szego {
        /// Log-symbol coefficients as "k:value,k:value"; each pair feeds L_k
        /// and L_{-k}.
        #[arg(long, default_value = "1:0.3")]
        logcoeffs: String,
        #[arg(long, default_value_t = 30)]
        nmax: usize,
        #[arg(long, default_value_t = 0.7)]
        rho: f64,
    },
    /// Sine-kernel resolvent: RHP route vs the Nyström oracle.
    Sine {
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        b: f64,
        /// Nyström nodes.
        #[arg(long, default_value_t = 24)]
        n: usize,
    },
    /// Solve a general normalized 2×2 RHP from JSON contour and jump specs.
    Solve {
        #[arg(long)]
        contour: PathBuf,
        #[arg(long)]
        jump: PathBuf,
        /// Nodes per arc.
        #[arg(long, default_value_t = 40)]
        n: usize,
    },
}

#[derive(Subcommand, Clone)]
enum PiiSub {
    /// Tracy–Widom distribution from the Hastings–McLeod solution.
    Tw {
        #[arg(long, allow_hyphen_values = true, default_value_t = -5.0)]
        xmin: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 4.0)]
        xmax: f64,
        #[arg(long, default_value_t = 46)]
        n: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("RHLAB_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .expect("thread pool already initialized");
    }
    let code = match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<i32, String> {
    std::fs::create_dir_all(&cli.out).map_err(|e| format!("cannot create output dir: {e}"))?;
    let started = Instant::now();
    let (name, mut manifest, table, code) = match &cli.cmd {
        Cmd::Airy { grid, terms } => cmd_airy(grid, *terms)?,
        Cmd::Pii { sub: Some(PiiSub::Tw { xmin, xmax, n }), .. } => {
            cmd_pii_tw(&XGrid { xmin: *xmin, xmax: *xmax, n: *n })?
        }
        Cmd::Pii { sub: None, q, p, r, xmin, xmax, n, nodes } => {
            cmd_pii(*q, *p, *r, &XGrid { xmin: *xmin, xmax: *xmax, n: *n }, *nodes)?
        }
        Cmd::Mkdv { grid, t, amplitude, q0_file } => cmd_mkdv(grid, *t, *amplitude, q0_file.as_deref())?,
        Cmd::Nls { grid, t, amplitude, q0_file } => cmd_nls(grid, *t, *amplitude, q0_file.as_deref())?,
        Cmd::Opoly { weight, nmax } => cmd_opoly(weight, *nmax)?,
        Cmd::Szego { logcoeffs, nmax, rho } => cmd_szego(logcoeffs, *nmax, *rho)?,
        Cmd::Sine { x, a, b, n } => cmd_sine(*x, *a, *b, *n)?,
        Cmd::Solve { contour, jump, n } => cmd_solve(contour, jump, *n)?,
    };
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    manifest.exit_code = code;
    table
        .write(&cli.out.join(format!("{name}.csv")))
        .map_err(|e| format!("cannot write csv: {e}"))?;
    manifest
        .write(&cli.out.join(format!("{name}.manifest.json")))
        .map_err(|e| format!("cannot write manifest: {e}"))?;
    Ok(code)
}

type CmdOut = (String, RunManifest, CsvTable, i32);

fn cmd_airy(grid: &XGrid, terms: usize) -> Result<CmdOut, String> {
    use rhlab::airy;
    let mut manifest = RunManifest::new("airy");
    manifest.param("xmin", grid.xmin).param("xmax", grid.xmax).param("n", grid.n).param("terms", terms);
    let tol = 1e-10;
    manifest.tolerance("quadrature_vs_oracle", tol);
    let mut table = CsvTable::new(&["x", "quadrature", "series", "abs_diff"]);
    let mut worst = 0.0f64;
    for x in grid.points() {
        let quad = airy::ai_quadrature(x).map_err(|e| e.to_string())?;
        let series = if x >= 1.0 {
            airy::ai_series_plus(x, terms)
        } else if x <= -1.0 {
            airy::ai_series_minus(-x, terms.min(10))
        } else {
            airy::ai_taylor_oracle(x, 200)
        };
        if x.abs() <= 8.0 {
            worst = worst.max((quad - airy::ai_taylor_oracle(x, 400)).abs());
        }
        table.push(vec![x, quad, series, (quad - series).abs()]);
    }
    manifest.residual("max_quadrature_vs_oracle", worst);
    let code = if worst <= tol { 0 } else { 1 };
    Ok(("airy".into(), manifest, table, code))
}

fn cmd_pii(q: f64, p: Option<f64>, r: Option<f64>, grid: &XGrid, nodes: usize) -> Result<CmdOut, String> {
    use rhlab::painleve2::*;
    use rhlab::painleve2::PiiError;
    let p = p.unwrap_or(-q);
    let r = r.unwrap_or(0.0);
    let triple = StokesTriple::new(c64(p, 0.0), c64(q, 0.0), c64(r, 0.0));
    if triple.constraint_residual() > 1e-12 {
        return Err(format!(
            "Stokes parameters must satisfy p + q + r + pqr = 0 (residual {:.2e})",
            triple.constraint_residual()
        ));
    }
    let mut manifest = RunManifest::new("pii");
    manifest.param("q", q).param("p", p).param("r", r);
    manifest.param("xmin", grid.xmin).param("xmax", grid.xmax).param("n", grid.n);
    manifest.size("nodes_per_ray", nodes);
    let tol = 1e-8;
    manifest.tolerance("jump_residual", tol);
    let xs = grid.points();
    use rayon::prelude::*;
    let sols: Vec<Result<(f64, f64), String>> = xs
        .par_iter()
        .map(|&x| {
            match solve_pii_rhp(&triple, x, nodes) {
                Ok(sol) => Ok((extract_u(&sol).re, sol.jump_residual)),
                // keep the under-resolved solution; the residual column and the
                // exit code report the defect
                Err(PiiError::Solve(rhlab::rhsolver::SolveError::ResidualAboveTolerance {
                    solution,
                    ..
                })) => Ok((extract_u(&solution).re, solution.jump_residual)),
                Err(e) => Err(e.to_string()),
            }
        })
        .collect();
    // ODE continuation seeded near the right end of the grid
    let x_seed = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).clamp(0.0, 6.0);
    let (u_seed, up_seed) = u_and_slope(&triple, x_seed, nodes).map_err(|e| e.to_string())?;
    let x_lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let traj = pii_ode_continue(u_seed, up_seed, x_seed, x_lo - 0.5).map_err(|e| e.to_string())?;
    let is_as = (p + q).abs() < 1e-12 && r.abs() < 1e-12 && q.abs() < 1.0 && q != 0.0;
    let mut table = CsvTable::new(&["x", "u_rhp", "u_ode", "u_asym_minus", "u_asym_plus", "residual"]);
    let mut worst = 0.0f64;
    for (&x, sol) in xs.iter().zip(&sols) {
        let (u, resid) = sol.clone()?;
        worst = worst.max(resid);
        let u_ode = if x <= x_seed { traj.at(x)[0] } else { f64::NAN };
        let am = if is_as && x < -3.0 {
            asymptotics_minus(q, x).map_err(|e| e.to_string())?
        } else {
            f64::NAN
        };
        let ap = if is_as && x > 1.0 { asymptotics_plus(q, x) } else { f64::NAN };
        table.push(vec![x, u, u_ode, am, ap, resid]);
    }
    manifest.residual("max_jump_residual", worst);
    let code = if worst <= tol { 0 } else { 1 };
    Ok(("pii".into(), manifest, table, code))
}

fn cmd_pii_tw(grid: &XGrid) -> Result<CmdOut, String> {
    use rhlab::painleve2::TracyWidom;
    if grid.xmin < -5.0 || grid.xmax > 4.0 {
        return Err("the distribution window is [-5, 4]".into());
    }
    let mut manifest = RunManifest::new("pii-tw");
    manifest.param("xmin", grid.xmin).param("xmax", grid.xmax).param("n", grid.n);
    manifest.tolerance("right_tail_defect", 1e-6);
    let tw = TracyWidom::new().map_err(|e| e.to_string())?;
    let mut table = CsvTable::new(&["x", "F"]);
    for x in grid.points() {
        table.push(vec![x, tw.cdf(x)]);
    }
    let tail = 1.0 - tw.cdf(4.0);
    manifest.residual("right_tail_defect", tail);
    let code = if tail <= 1e-6 { 0 } else { 1 };
    Ok(("pii_tw".into(), manifest, table, code))
}

fn read_q0_file(path: &Path) -> Result<Vec<(f64, Complex64)>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(|c| c.trim()).collect();
        if cells.len() < 2 {
            return Err(format!("{}:{}: expected x,re[,im]", path.display(), lineno + 1));
        }
        let x: f64 = cells[0].parse().map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?;
        let re: f64 = cells[1].parse().map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?;
        let im: f64 = if cells.len() > 2 { cells[2].parse().unwrap_or(0.0) } else { 0.0 };
        rows.push((x, c64(re, im)));
    }
    if rows.len() < 8 {
        return Err(format!("{}: need at least 8 samples", path.display()));
    }
    Ok(rows)
}

/// Piecewise-linear sampler of tabulated initial data (zero outside).
fn tabulated(rows: Vec<(f64, Complex64)>) -> impl Fn(f64) -> Complex64 + Sync + Send {
    move |x: f64| {
        let n = rows.len();
        if x <= rows[0].0 || x >= rows[n - 1].0 {
            return c64(0.0, 0.0);
        }
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if rows[mid].0 <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = (x - rows[lo].0) / (rows[hi].0 - rows[lo].0);
        rows[lo].1 * (1.0 - t) + rows[hi].1 * t
    }
}

fn zgrid_for(window: f64, step: f64) -> Vec<f64> {
    let n = (window / step).round() as i64;
    (-n..=n).map(|j| j as f64 * step).collect()
}

fn cmd_mkdv(grid: &XGrid, t: f64, amplitude: f64, q0_file: Option<&Path>) -> Result<CmdOut, String> {
    use rhlab::scattering::*;
    let mut manifest = RunManifest::new("mkdv");
    manifest
        .param("t", t)
        .param("amplitude", amplitude)
        .param("xmin", grid.xmin)
        .param("xmax", grid.xmax)
        .param("n", grid.n);
    let tol = 1e-4;
    manifest.tolerance("oracle_agreement", tol);
    let u0: Box<dyn Fn(f64) -> f64 + Sync + Send> = match q0_file {
        Some(p) => {
            manifest.param("q0_file", p.display().to_string());
            let f = tabulated(read_q0_file(p)?);
            Box::new(move |x| f(x).re)
        }
        None => Box::new(move |x| amplitude * (-x * x).exp()),
    };
    let zg = zgrid_for(10.5, 0.1);
    manifest.size("z_grid", zg.len());
    let r = direct_scattering_mkdv(&*u0, 8.0, &zg).map_err(|e| e.to_string())?;
    manifest.residual("reflection_sup_norm", r.sup_norm);
    let xs = grid.points();
    let rec = reconstruct_mkdv_grid(&r, &xs, t).map_err(|e| e.to_string())?;
    let og = OracleGrid { x0: -90.0, length: 180.0, n: 2048 };
    let init: Vec<Complex64> = og.xs().iter().map(|&x| c64(u0(x), 0.0)).collect();
    let oracle = if t > 0.0 {
        split_step_auto(Flow::Mkdv, &og, &init, t, 1e-7).map_err(|e| e.to_string())?
    } else {
        init.clone()
    };
    let mut table = CsvTable::new(&["x", "u_rhp", "u_oracle", "abs_diff"]);
    let mut worst = 0.0f64;
    for (&x, u) in xs.iter().zip(&rec) {
        let want = og.sample_spectral(&oracle, x).re;
        let diff = (u.re - want).abs();
        worst = worst.max(diff);
        table.push(vec![x, u.re, want, diff]);
    }
    manifest.residual("max_abs_diff", worst);
    let code = if worst <= tol { 0 } else { 1 };
    Ok(("mkdv".into(), manifest, table, code))
}

fn cmd_nls(grid: &XGrid, t: f64, amplitude: f64, q0_file: Option<&Path>) -> Result<CmdOut, String> {
    use rhlab::scattering::*;
    let mut manifest = RunManifest::new("nls");
    manifest
        .param("t", t)
        .param("amplitude", amplitude)
        .param("xmin", grid.xmin)
        .param("xmax", grid.xmax)
        .param("n", grid.n);
    let tol = 1e-4;
    manifest.tolerance("oracle_agreement", tol);
    let q0: Box<dyn Fn(f64) -> Complex64 + Sync + Send> = match q0_file {
        Some(p) => {
            manifest.param("q0_file", p.display().to_string());
            Box::new(tabulated(read_q0_file(p)?))
        }
        None => Box::new(move |x| c64(amplitude * (-x * x).exp(), 0.0)),
    };
    let zg = zgrid_for(10.5, 0.1);
    manifest.size("z_grid", zg.len());
    let r0 = direct_scattering_nls(&*q0, 8.0, &zg).map_err(|e| e.to_string())?;
    manifest.residual("reflection_sup_norm", r0.sup_norm);
    let xs = grid.points();
    let rec = reconstruct_nls_grid(&r0, &xs, t).map_err(|e| e.to_string())?;
    let og = OracleGrid { x0: -60.0, length: 120.0, n: 2048 };
    let init: Vec<Complex64> = og.xs().iter().map(|&x| q0(x)).collect();
    let oracle = if t > 0.0 {
        split_step_auto(Flow::Nls, &og, &init, t, 1e-8).map_err(|e| e.to_string())?
    } else {
        init.clone()
    };
    let mut table = CsvTable::new(&["x", "re_q_rhp", "im_q_rhp", "re_q_oracle", "im_q_oracle", "abs_diff"]);
    let mut worst = 0.0f64;
    for (&x, qv) in xs.iter().zip(&rec) {
        let want = og.sample_spectral(&oracle, x);
        let diff = (qv - want).norm();
        worst = worst.max(diff);
        table.push(vec![x, qv.re, qv.im, want.re, want.im, diff]);
    }
    manifest.residual("max_abs_diff", worst);
    let code = if worst <= tol { 0 } else { 1 };
    Ok(("nls".into(), manifest, table, code))
}

fn cmd_opoly(weight: &str, nmax: usize) -> Result<CmdOut, String> {
    use rhlab::orthopoly::*;
    let w = match weight {
        "hermite" => WeightSpec::hermite(),
        "quartic" => WeightSpec::quartic(),
        other => return Err(format!("unknown weight '{other}' (expected hermite | quartic)")),
    };
    if nmax == 0 || nmax > 10 {
        return Err("nmax must be in 1..=10".into());
    }
    let mut manifest = RunManifest::new("opoly");
    manifest.param("weight", weight).param("nmax", nmax);
    let tol = 1e-8;
    manifest.tolerance("fik_residuals", tol);
    let fam = gram_schmidt_monic(&w, nmax + 2).map_err(|e| e.to_string())?;
    let mut table = CsvTable::new(&["n", "a_n", "b_n_sq", "jump_residual", "norm_residual"]);
    let mut worst = 0.0f64;
    for n in 1..=nmax {
        let (jr, nr) = fik_residual(&fam, &w, n).map_err(|e| e.to_string())?;
        let (a_fit, b_fit, _) = recurrence_from_rhp(&fam, n).map_err(|e| e.to_string())?;
        let (an, bn2) = three_term_coeffs(&fam, n, &a_fit, &b_fit).map_err(|e| e.to_string())?;
        worst = worst.max(jr).max(nr);
        table.push(vec![n as f64, an, bn2, jr, nr]);
    }
    manifest.residual("max_fik_residual", worst);
    let code = if worst <= tol { 0 } else { 1 };
    Ok(("opoly".into(), manifest, table, code))
}

fn parse_logcoeffs(s: &str) -> Result<Vec<(i64, Complex64)>, String> {
    let mut out = Vec::new();
    for part in s.split([',', ';']) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once(':')
            .ok_or_else(|| format!("bad logcoeffs entry '{part}', expected k:value"))?;
        let k: i64 = k.trim().parse().map_err(|e| format!("bad index in '{part}': {e}"))?;
        let v: f64 = v.trim().parse().map_err(|e| format!("bad value in '{part}': {e}"))?;
        out.push((k, c64(v, 0.0)));
        if k != 0 {
            out.push((-k, c64(v, 0.0)));
        }
    }
    if out.is_empty() {
        return Err("logcoeffs is empty".into());
    }
    Ok(out)
}

fn cmd_szego(logcoeffs: &str, nmax: usize, rho: f64) -> Result<CmdOut, String> {
    use rhlab::toeplitz::*;
    let lk = parse_logcoeffs(logcoeffs)?;
    let s = symbol_from_logcoeffs(&lk, 64).map_err(|e| e.to_string())?;
    let mut manifest = RunManifest::new("szego");
    manifest.param("logcoeffs", logcoeffs).param("nmax", nmax).param("rho", rho);
    let gap_tol = 1e-6;
    let resolvent_tol = 1e-6;
    manifest.tolerance("szego_gap_at_nmax", gap_tol);
    manifest.tolerance("resolvent_vs_direct", resolvent_tol);
    manifest.size("resolvent_n_cap", 6);
    let mut table = CsvTable::new(&["n", "log_det_direct", "asymptote", "log_det_resolvent", "lens_v_minus_i"]);
    let mut resolvent_worst = 0.0f64;
    for n in 0..=nmax {
        let (logd, _) = toeplitz_det(&s, n);
        let asym = szego_asymptote(&s, n);
        let via = if (1..=6).contains(&n) {
            let v = logdet_via_resolvent(&s, n, 20).map_err(|e| e.to_string())?;
            resolvent_worst = resolvent_worst.max((v - logd).abs());
            v
        } else {
            f64::NAN
        };
        let lens = if n >= 4 && (0.05..1.0).contains(&rho) {
            lens_deform(&s, n, rho, 64 + 2 * n).map_err(|e| e.to_string())?.v_minus_i_sup
        } else {
            f64::NAN
        };
        table.push(vec![n as f64, logd, asym, via, lens]);
    }
    let (logd_final, _) = toeplitz_det(&s, nmax);
    let gap = (logd_final - szego_asymptote(&s, nmax)).abs();
    manifest.residual("szego_gap_at_nmax", gap);
    manifest.residual("resolvent_vs_direct", resolvent_worst);
    let code = if gap <= gap_tol && resolvent_worst <= resolvent_tol { 0 } else { 1 };
    Ok(("szego".into(), manifest, table, code))
}

fn cmd_sine(x: f64, a: f64, b: f64, n: usize) -> Result<CmdOut, String> {
    use rhlab::intops::*;
    if b <= a {
        return Err("need b > a".into());
    }
    let mut manifest = RunManifest::new("sine");
    manifest.param("x", x).param("a", a).param("b", b).param("n", n);
    let tol = 1e-6;
    manifest.tolerance("resolvent_relative_sup", tol);
    let res = resolvent_via_rhp(sine_kernel(x, a, b), 22, 14).map_err(|e| e.to_string())?;
    let ny = nystrom_oracle(&sine_kernel(x, a, b), n).map_err(|e| e.to_string())?;
    manifest.residual("fredholm_det_nystrom", ny.det);
    manifest.residual("side_agreement", res.side_agreement);
    let m = ny.nodes.len();
    let mut table = CsvTable::new(&["z", "zp", "resolvent_rhp", "resolvent_nystrom", "abs_diff"]);
    let mut sup = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let zi = c64(ny.nodes[i], 0.0);
            let zj = c64(ny.nodes[j], 0.0);
            let l = if i == j { res.eval_diag(zi) } else { res.eval(zi, zj) };
            let want = ny.resolvent[(i, j)];
            sup = sup.max((l - want).norm());
            scale = scale.max(want.norm());
            table.push(vec![ny.nodes[i], ny.nodes[j], l.re, want.re, (l - want).norm()]);
        }
    }
    let rel = sup / scale.max(1e-300);
    manifest.residual("resolvent_relative_sup", rel);
    let code = if rel <= tol { 0 } else { 1 };
    Ok(("sine".into(), manifest, table, code))
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum JumpSpec {
    Builtin {
        builtin: String,
        #[serde(default)]
        c: Option<f64>,
    },
    PerArc {
        per_arc: Vec<[[f64; 2]; 4]>,
    },
}

fn cmd_solve(contour_path: &Path, jump_path: &Path, n: usize) -> Result<CmdOut, String> {
    use rhlab::contour::{build_contour, ArcSpec};
    use rhlab::rhsolver::*;
    let ctext = std::fs::read_to_string(contour_path).map_err(|e| format!("{}: {e}", contour_path.display()))?;
    let specs: Vec<ArcSpec> =
        serde_json::from_str(&ctext).map_err(|e| format!("{}: {e}", contour_path.display()))?;
    let contour = build_contour(&specs).map_err(|e| e.to_string())?;
    let jtext = std::fs::read_to_string(jump_path).map_err(|e| format!("{}: {e}", jump_path.display()))?;
    let jspec: JumpSpec = serde_json::from_str(&jtext).map_err(|e| format!("{}: {e}", jump_path.display()))?;
    let n_arcs = contour.n_arcs();
    let jump = match jspec {
        JumpSpec::Builtin { builtin, c } => match builtin.as_str() {
            "identity" => JumpField::new(contour, |_, _| Mat2::identity()),
            "diag" => {
                let cval = c.unwrap_or(2.0);
                if cval == 0.0 {
                    return Err("diag jump needs c != 0".into());
                }
                JumpField::new(contour, move |_, _| Mat2::diag(c64(cval, 0.0), c64(1.0 / cval, 0.0)))
            }
            other => return Err(format!("unknown builtin jump '{other}'")),
        },
        JumpSpec::PerArc { per_arc } => {
            if per_arc.len() != n_arcs {
                return Err(format!("jump gives {} matrices for {} arcs", per_arc.len(), n_arcs));
            }
            let mats: Vec<Mat2> = per_arc
                .iter()
                .map(|m| {
                    Mat2::new(
                        c64(m[0][0], m[0][1]),
                        c64(m[1][0], m[1][1]),
                        c64(m[2][0], m[2][1]),
                        c64(m[3][0], m[3][1]),
                    )
                })
                .collect();
            JumpField::new(contour, move |arc, _| mats[arc])
        }
    };
    let mut manifest = RunManifest::new("solve");
    manifest.param("contour", contour_path.display().to_string());
    manifest.param("jump", jump_path.display().to_string());
    manifest.size("nodes_per_arc", n);
    let tol = 1e-8;
    manifest.tolerance("jump_residual", tol);
    let cfg = SolverConfig { residual_tol: f64::INFINITY, cond_limit: 1e12 };
    let ns = vec![n; n_arcs];
    let sol = solve_normalized(&jump, &ns, &cfg).map_err(|e| e.to_string())?;
    manifest.residual("jump_residual", sol.jump_residual);
    manifest.residual("condition_estimate", sol.cond_estimate);
    for (i, label) in ["m1_11", "m1_12", "m1_21", "m1_22"].iter().enumerate() {
        manifest.residual(&format!("{label}_re"), sol.m1.0[i].re);
        manifest.residual(&format!("{label}_im"), sol.m1.0[i].im);
    }
    let mut table = CsvTable::new(&[
        "arc",
        "node_re",
        "node_im",
        "mplus_11_re",
        "mplus_11_im",
        "mplus_12_re",
        "mplus_12_im",
        "mplus_21_re",
        "mplus_21_im",
        "mplus_22_re",
        "mplus_22_im",
        "mminus_11_re",
        "mminus_11_im",
        "mminus_12_re",
        "mminus_12_im",
        "mminus_21_re",
        "mminus_21_im",
        "mminus_22_re",
        "mminus_22_im",
    ]);
    let mut g = 0usize;
    for (a, nodes) in sol.ops.disc.nodes.iter().enumerate() {
        for &z in nodes {
            let mp = &sol.m_plus[g];
            let mm = &sol.m_minus[g];
            let mut row = vec![a as f64, z.re, z.im];
            for e in 0..4 {
                row.push(mp.0[e].re);
                row.push(mp.0[e].im);
            }
            for e in 0..4 {
                row.push(mm.0[e].re);
                row.push(mm.0[e].im);
            }
            table.push(row);
            g += 1;
        }
    }
    let code = if sol.jump_residual <= tol { 0 } else { 1 };
    Ok(("solve".into(), manifest, table, code))
}
