use super::grid::{parse_grid, parse_int_list};
use super::output::{format_number, Cell, Header, Table};
use super::{
    write_file, AlphaArg, AveragingKind, CliError, Command, GlobalArgs, Imperfections, ReceiverKind,
};
use crate::alphabet::{
    chefles_min_error, helstrom_error, overlap, usd_inconclusive, SignalAlphabet,
};
use crate::gaussian::{scan_optimality, standard_phi_grid, standard_r_grid, ScanPoint};
use crate::homodyne::HomodyneConfig;
use crate::mode_overlap::{
    best_alignment, chebyshev_impulse, effective_response, Averaging, ImpulseResponse, Truncation,
    WindowSpec,
};
use crate::montecarlo::{matched_inc_comparison, sweep_operating_curve, SweepFamily};
use crate::pnr::{self, PnrConfig};
use crate::receiver::Receiver;
use crate::Error;

fn require<'a, T: ?Sized>(value: Option<&'a T>, name: &str) -> Result<&'a T, CliError> {
    value.ok_or_else(|| CliError::parameter(name, "required parameter is missing"))
}

fn alpha_grid(arg: &AlphaArg) -> Result<(String, Vec<f64>), CliError> {
    let text = require(arg.alpha_sq.as_deref(), "alpha-sq")?;
    Ok((text.to_string(), parse_grid("alpha-sq", text)?))
}

fn alphabet(alpha_sq: f64) -> Result<SignalAlphabet, CliError> {
    Ok(SignalAlphabet::from_mean_photon_number(alpha_sq)?)
}

/// Bound at the inconclusive rate `p_inc` for the states reaching the
/// detector.
fn chefles_at(a: &SignalAlphabet, eta: f64, p_inc: f64) -> Option<f64> {
    chefles_min_error(&a.attenuated(eta), p_inc)
        .ok()
        .map(|b| b.p_error)
}

struct Run {
    header: Header,
    eta_corrected: bool,
}

impl Run {
    fn new(command: &'static str, global: &GlobalArgs) -> Self {
        Self {
            header: Header {
                command,
                settings: Vec::new(),
            },
            eta_corrected: global.eta_corrected,
        }
    }

    fn set(&mut self, key: &'static str, value: impl ToString) {
        self.header.settings.push((key, value.to_string()));
    }

    fn num(&mut self, key: &'static str, value: f64) {
        self.set(key, format_number(value));
    }

    fn imperfections(&mut self, imp: &Imperfections) {
        self.num("eta", imp.eta);
        self.num("dark", imp.dark);
        self.num("visibility", imp.visibility);
    }

    /// The amplitude axis, rescaled under `--eta-corrected`.
    fn axis(&self, alpha_sq: f64, eta: f64) -> Cell {
        Cell::Num(if self.eta_corrected {
            eta * alpha_sq
        } else {
            alpha_sq
        })
    }

    fn record_axis(&mut self) {
        self.set("eta-corrected", self.eta_corrected);
    }
}

pub(super) fn execute(command: &Command, global: &GlobalArgs) -> Result<(Header, Table), CliError> {
    if global.workers == Some(0) {
        return Err(CliError::parameter("workers", "need at least one worker"));
    }
    match command {
        Command::Bounds { alpha } => bounds(global, alpha),
        Command::HdCurve {
            alpha,
            b,
            eta,
            electronic_noise,
        } => hd_curve(global, alpha, b.as_deref(), *eta, *electronic_noise),
        Command::PnrCurve {
            alpha,
            beta,
            m,
            imperfections,
        } => pnr_curve(global, alpha, beta.as_deref(), *m, imperfections),
        Command::OptimizeBeta {
            alpha,
            m,
            imperfections,
        } => optimize_beta(global, alpha, m, imperfections),
        Command::Compare { alpha, m, eta } => compare(global, alpha, *m, *eta),
        Command::GaussianScan {
            alpha_sq,
            lambda_b,
            r,
            phi,
        } => gaussian_scan(global, *alpha_sq, lambda_b, r.as_deref(), phi.as_deref()),
        Command::Simulate {
            receiver,
            alpha,
            param,
            m,
            imperfections,
            electronic_noise,
            n_trials,
            seed,
        } => simulate(
            global,
            SimulateArgs {
                receiver: *receiver,
                alpha,
                param: param.as_deref(),
                m: *m,
                imperfections,
                electronic_noise: *electronic_noise,
                n_trials: *n_trials,
                seed: *seed,
            },
        ),
        Command::ModeOverlap {
            order,
            cutoff_hz,
            ripple_db,
            window,
            sample_rate,
            averaging,
            dt,
            samples,
            response,
            geff_out,
        } => mode_overlap(
            global,
            ModeOverlapArgs {
                order: *order,
                cutoff_hz: *cutoff_hz,
                ripple_db,
                window: *window,
                sample_rate: *sample_rate,
                averaging: *averaging,
                dt: *dt,
                samples: *samples,
                response: response.as_deref(),
                geff_out: geff_out.as_deref(),
            },
        ),
    }
}

fn bounds(global: &GlobalArgs, alpha: &AlphaArg) -> Result<(Header, Table), CliError> {
    let mut run = Run::new("bounds", global);
    let (text, grid) = alpha_grid(alpha)?;
    run.set("alpha-sq", text);
    let mut table = Table::new(&["alpha_sq", "sigma", "helstrom", "usd_pinc"]);
    for alpha_sq in grid {
        let a = alphabet(alpha_sq)?;
        table.push(vec![
            alpha_sq.into(),
            overlap(&a).into(),
            helstrom_error(&a).into(),
            usd_inconclusive(&a)?.into(),
        ]);
    }
    Ok((run.header, table))
}

fn hd_curve(
    global: &GlobalArgs,
    alpha: &AlphaArg,
    b: Option<&str>,
    eta: f64,
    electronic_noise: f64,
) -> Result<(Header, Table), CliError> {
    let mut run = Run::new("hd-curve", global);
    let (text, alphas) = alpha_grid(alpha)?;
    let b_text = require(b, "b")?;
    let thresholds = parse_grid("b", b_text)?;
    run.set("alpha-sq", text);
    run.set("b", b_text);
    run.num("eta", eta);
    run.num("electronic-noise", electronic_noise);
    run.record_axis();
    let mut table = Table::new(&["alpha_sq", "B", "p_inc", "p_err", "chefles"]);
    for &alpha_sq in &alphas {
        let a = alphabet(alpha_sq)?;
        for &threshold in &thresholds {
            let cfg = HomodyneConfig::with_efficiency(threshold, eta)?
                .with_electronic_noise(electronic_noise)?;
            let (p_inc, p_err) = match cfg.operating_point(&a) {
                Ok(op) => (op.p_inconclusive, Some(op.p_error)),
                Err(Error::FullyInconclusive) => (1.0, None),
                Err(e) => return Err(e.into()),
            };
            table.push(vec![
                run.axis(alpha_sq, eta),
                threshold.into(),
                p_inc.into(),
                p_err.into(),
                chefles_at(&a, eta, p_inc).into(),
            ]);
        }
    }
    Ok((run.header, table))
}

fn pnr_template(m: u32, imp: &Imperfections) -> Result<PnrConfig, CliError> {
    Ok(PnrConfig::new(0.0, m)?.with_imperfections(imp.eta, imp.dark, imp.visibility)?)
}

fn pnr_curve(
    global: &GlobalArgs,
    alpha: &AlphaArg,
    beta: Option<&str>,
    m: u32,
    imp: &Imperfections,
) -> Result<(Header, Table), CliError> {
    let mut run = Run::new("pnr-curve", global);
    let (text, alphas) = alpha_grid(alpha)?;
    let beta_text = require(beta, "beta")?;
    let betas = parse_grid("beta", beta_text)?;
    run.set("alpha-sq", text);
    run.set("beta", beta_text);
    run.set("m", m);
    run.imperfections(imp);
    run.record_axis();
    let template = pnr_template(m, imp)?;
    let mut table = Table::new(&["alpha_sq", "beta", "m", "p_inc", "p_err", "chefles"]);
    for &alpha_sq in &alphas {
        let a = alphabet(alpha_sq)?;
        for &beta in &betas {
            let cfg = template.with_displacement(beta)?;
            let (p_inc, p_err) = match cfg.operating_point(&a) {
                Ok(op) => (op.p_inconclusive, Some(op.p_error)),
                Err(Error::FullyInconclusive) => (1.0, None),
                Err(e) => return Err(e.into()),
            };
            table.push(vec![
                run.axis(alpha_sq, imp.eta),
                beta.into(),
                m.into(),
                p_inc.into(),
                p_err.into(),
                chefles_at(&a, imp.eta, p_inc).into(),
            ]);
        }
    }
    Ok((run.header, table))
}

fn optimize_beta(
    global: &GlobalArgs,
    alpha: &AlphaArg,
    m_text: &str,
    imp: &Imperfections,
) -> Result<(Header, Table), CliError> {
    let mut run = Run::new("optimize-beta", global);
    let (text, alphas) = alpha_grid(alpha)?;
    let thresholds = parse_int_list("m", m_text)?;
    run.set("alpha-sq", text);
    run.set("m", m_text);
    run.imperfections(imp);
    run.record_axis();
    let mut table = Table::new(&["alpha_sq", "m", "beta_opt", "p_inc", "p_err", "multimodal"]);
    for &alpha_sq in &alphas {
        let a = alphabet(alpha_sq)?;
        for &m in &thresholds {
            let opt = pnr::optimize_displacement_for(&a, &pnr_template(m, imp)?)?;
            table.push(vec![
                run.axis(alpha_sq, imp.eta),
                m.into(),
                opt.beta.into(),
                opt.operating_point.p_inconclusive.into(),
                opt.operating_point.p_error.into(),
                opt.multimodal.into(),
            ]);
        }
    }
    Ok((run.header, table))
}

fn compare(
    global: &GlobalArgs,
    alpha: &AlphaArg,
    m: u32,
    eta: f64,
) -> Result<(Header, Table), CliError> {
    let mut run = Run::new("compare", global);
    let (text, alphas) = alpha_grid(alpha)?;
    run.set("alpha-sq", text);
    run.set("m", m);
    run.num("eta", eta);
    run.record_axis();
    let mut table = Table::new(&["alpha_sq", "p_inc", "p_err_pnr", "p_err_hd", "chefles"]);
    for &alpha_sq in &alphas {
        let row = matched_inc_comparison(&alphabet(alpha_sq)?, m, eta, 0, 0, None)?;
        table.push(vec![
            run.axis(alpha_sq, eta),
            row.p_inconclusive.into(),
            row.pnr.p_error.into(),
            row.homodyne.p_error.into(),
            row.chefles.into(),
        ]);
    }
    Ok((run.header, table))
}

fn describe(p: &ScanPoint) -> String {
    format!("(r={},phi={})", format_number(p.r), format_number(p.phi))
}

fn gaussian_scan(
    global: &GlobalArgs,
    alpha_sq: Option<f64>,
    lambda_text: &str,
    r_text: Option<&str>,
    phi_text: Option<&str>,
) -> Result<(Header, Table), CliError> {
    let mut run = Run::new("gaussian-scan", global);
    let alpha_sq = *require(alpha_sq.as_ref(), "alpha-sq")?;
    let lambdas = parse_grid("lambda-b", lambda_text)?;
    let r_grid = match r_text {
        Some(t) => parse_grid("r", t)?,
        None => standard_r_grid(),
    };
    let phi_grid = match phi_text {
        Some(t) => parse_grid("phi", t)?,
        None => standard_phi_grid(),
    };
    run.num("alpha-sq", alpha_sq);
    run.set("lambda-b", lambda_text);
    run.set("r", r_text.unwrap_or("0:3:13,20"));
    run.set("phi", phi_text.unwrap_or("0:pi:17"));
    let a = alphabet(alpha_sq)?;
    let mut table = Table::new(&["r", "phi", "lambda_B", "p_error", "p_inconclusive"]);
    for &lambda_b in &lambdas {
        let report = scan_optimality(&a, lambda_b, &r_grid, &phi_grid)?;
        for p in &report.points {
            table.push(vec![
                p.r.into(),
                p.phi.into(),
                p.lambda_b.into(),
                p.p_error.into(),
                p.p_inconclusive.into(),
            ]);
        }
        table.notes.push(format!(
            "check lambda_B={} argmin_error={} argmin_inconclusive={} corner_optimal={} violations={}",
            format_number(lambda_b),
            describe(&report.argmin_error),
            describe(&report.argmin_inconclusive),
            report.argmins_at_corner(),
            report.violations.len(),
        ));
        for v in &report.violations {
            table.notes.push(format!(
                "violation lambda_B={} kind={:?} r={} phi={} value={} reference={}",
                format_number(lambda_b),
                v.kind,
                format_number(v.r),
                format_number(v.phi),
                format_number(v.value),
                format_number(v.reference),
            ));
        }
    }
    Ok((run.header, table))
}

struct SimulateArgs<'a> {
    receiver: Option<ReceiverKind>,
    alpha: &'a AlphaArg,
    param: Option<&'a str>,
    m: u32,
    imperfections: &'a Imperfections,
    electronic_noise: f64,
    n_trials: u64,
    seed: Option<u64>,
}

fn simulate(global: &GlobalArgs, args: SimulateArgs) -> Result<(Header, Table), CliError> {
    let mut run = Run::new("simulate", global);
    let seed = *require(args.seed.as_ref(), "seed")?;
    let receiver = *require(args.receiver.as_ref(), "receiver")?;
    let (text, alphas) = alpha_grid(args.alpha)?;
    let param_text = require(args.param, "param")?;
    let params = parse_grid("param", param_text)?;
    if args.n_trials == 0 {
        return Err(CliError::parameter("n-trials", "need at least one trial"));
    }
    let imp = args.imperfections;
    let family = match receiver {
        ReceiverKind::Hd => {
            HomodyneConfig::with_efficiency(0.0, imp.eta)?
                .with_electronic_noise(args.electronic_noise)?;
            SweepFamily::Homodyne {
                efficiency: imp.eta,
                electronic_noise: args.electronic_noise,
            }
        }
        ReceiverKind::Pnr => SweepFamily::Pnr {
            template: pnr_template(args.m, imp)?,
        },
    };
    run.set(
        "receiver",
        if receiver == ReceiverKind::Hd {
            "hd"
        } else {
            "pnr"
        },
    );
    run.set("alpha-sq", text);
    run.set("param", param_text);
    if receiver == ReceiverKind::Pnr {
        run.set("m", args.m);
        run.imperfections(imp);
    } else {
        run.num("eta", imp.eta);
        run.num("electronic-noise", args.electronic_noise);
    }
    run.set("n-trials", args.n_trials);
    run.set("seed", seed);
    run.record_axis();

    let rows = sweep_operating_curve(
        &alphas,
        &family,
        &params,
        args.n_trials,
        seed,
        global.workers,
    )?;
    let mut table = Table::new(&[
        "receiver",
        "alpha_sq",
        "parameter",
        "p_err_emp",
        "se_err",
        "p_inc_emp",
        "se_inc",
        "p_err_closed",
        "p_inc_closed",
        "chefles_bound",
    ]);
    for row in rows {
        let a = alphabet(row.alpha_sq)?;
        let p_inc_closed = row.closed.map_or(1.0, |op| op.p_inconclusive);
        table.push(vec![
            row.receiver.into(),
            run.axis(row.alpha_sq, imp.eta),
            row.parameter.into(),
            row.empirical.p_error_hat.into(),
            row.empirical.se_error.into(),
            row.empirical.p_inconclusive_hat.into(),
            row.empirical.se_inconclusive.into(),
            row.closed.map(|op| op.p_error).into(),
            p_inc_closed.into(),
            chefles_at(&a, imp.eta, p_inc_closed).into(),
        ]);
    }
    Ok((run.header, table))
}

struct ModeOverlapArgs<'a> {
    order: usize,
    cutoff_hz: f64,
    ripple_db: &'a str,
    window: f64,
    sample_rate: f64,
    averaging: AveragingKind,
    dt: f64,
    samples: usize,
    response: Option<&'a std::path::Path>,
    geff_out: Option<&'a std::path::Path>,
}

fn mode_overlap(global: &GlobalArgs, args: ModeOverlapArgs) -> Result<(Header, Table), CliError> {
    let mut run = Run::new("mode-overlap", global);
    let averaging = match args.averaging {
        AveragingKind::Continuous => Averaging::Continuous,
        AveragingKind::Sampled => Averaging::Sampled,
    };
    let w = WindowSpec::new(args.window, args.sample_rate)?.with_averaging(averaging);
    run.num("window", args.window);
    run.num("sample-rate", args.sample_rate);
    run.set(
        "averaging",
        if averaging == Averaging::Sampled {
            "sampled"
        } else {
            "continuous"
        },
    );

    let mut responses: Vec<(Cell, Cell, Cell, ImpulseResponse)> = Vec::new();
    if let Some(path) = args.response {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
        let g = ImpulseResponse::from_text(&text)?.normalized()?;
        run.set("response", path.display());
        responses.push(("file".into(), Cell::Missing, Cell::Missing, g));
    } else {
        let ripples = parse_grid("ripple-db", args.ripple_db)?;
        run.set("order", args.order);
        run.num("cutoff-hz", args.cutoff_hz);
        run.set("ripple-db", args.ripple_db);
        run.num("dt", args.dt);
        run.set("samples", args.samples);
        for ripple in ripples {
            let g = chebyshev_impulse(
                args.order,
                args.cutoff_hz,
                ripple,
                args.dt,
                args.samples,
                Truncation::Extend,
            )?;
            responses.push(("chebyshev".into(), args.cutoff_hz.into(), ripple.into(), g));
        }
    }
    if args.geff_out.is_some() && responses.len() != 1 {
        return Err(CliError::parameter(
            "geff-out",
            "needs exactly one response (a single ripple value)",
        ));
    }

    let mut table = Table::new(&["source", "cutoff_hz", "ripple_db", "g12", "delay_s"]);
    for (source, cutoff, ripple, g) in responses {
        let geff = effective_response(&g, &w)?;
        let best = best_alignment(&geff, &w)?;
        if let Some(path) = args.geff_out {
            write_file(path, &geff.to_text())?;
        }
        table.push(vec![
            source,
            cutoff,
            ripple,
            best.g12.into(),
            best.delay.into(),
        ]);
    }
    Ok((run.header, table))
}
