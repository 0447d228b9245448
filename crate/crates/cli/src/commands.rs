//! One function per command. Each returns the artifacts to write and a
//! one-line summary; verdicts never turn into errors.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use tscale_core::mnc::{axiom_suite, FamilyGenerator};
use tscale_core::solver::estimate_bound;
use tscale_core::*;
use std::result::Result;

use crate::catalog;
use crate::config::*;
use crate::error::CliError;
use crate::output::{emit_plot_data, trace_report, Report};

pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub summary: String,
    /// Failure detected after the artifacts were produced.
    pub failure: Option<CliError>,
}

impl Outcome {
    fn new(summary: String) -> Self {
        Outcome { files: Vec::new(), summary, failure: None }
    }

    fn file(&mut self, name: &str, body: String) -> &mut Self {
        self.files.push((name.to_string(), body));
        self
    }
}

pub struct Context<'a> {
    pub cfg: &'a RunConfig,
    pub base: &'a Path,
    pub seed: u64,
}

fn missing(section: &str) -> CliError {
    CliError::Validation(format!("missing [{section}] section"))
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Only the section of the selected command may be present.
pub fn check_sections(cfg: &RunConfig) -> Result<(), CliError> {
    let present = [
        ("classify", cfg.classify.is_some()),
        ("integrate", cfg.integrate.is_some()),
        ("rdcheck", cfg.rdcheck.is_some()),
        ("solve", cfg.solve.is_some()),
        ("picard", cfg.picard.is_some()),
        ("mnc", cfg.mnc.is_some()),
        ("kamke", cfg.kamke.is_some()),
        ("parabolic", cfg.parabolic.is_some()),
        ("study", cfg.study.is_some()),
    ];
    let name = cfg.command.name();
    for (section, there) in present {
        if there && section != name {
            return Err(invalid(format!("section [{section}] does not apply to command `{name}`")));
        }
    }
    Ok(())
}

fn scale(ctx: &Context<'_>) -> Result<TimeScale, CliError> {
    let spec = ctx.cfg.scale.as_ref().ok_or_else(|| missing("scale"))?;
    match (&spec.segments, &spec.file) {
        (Some(segs), None) => {
            let raw: Vec<(f64, f64)> = segs.iter().map(|s| (s[0], s[1])).collect();
            Ok(TimeScale::new(&raw)?)
        }
        (None, Some(file)) => {
            let path = ctx.base.join(file);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            Ok(TimeScale::parse_segment_list(&text)?)
        }
        _ => Err(invalid("[scale] needs exactly one of `segments` and `file`")),
    }
}

fn interval(ctx: &Context<'_>) -> Result<TsInterval, CliError> {
    let ts = scale(ctx)?;
    Ok(match ctx.cfg.interval {
        Some([a, b]) => TsInterval::new(&ts, a, b)?,
        None => TsInterval::whole(&ts),
    })
}

fn policy(p: Option<PolicyCfg>) -> WindowPolicy {
    match p {
        Some(PolicyCfg::Whole) => WindowPolicy::Whole,
        _ => WindowPolicy::Existence,
    }
}

fn side(s: Side) -> &'static str {
    match s {
        Side::Dense => "dense",
        Side::Scattered => "scattered",
    }
}

pub fn classify(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.classify.as_ref().ok_or_else(|| missing("classify"))?;
    let iv = interval(ctx)?;
    let points = match &cfg.points {
        Some(p) => p.clone(),
        None => iv.scale().segments().iter().flat_map(|s| [s.lo, s.hi]).collect::<Vec<_>>(),
    };
    let mut points = points;
    points.dedup();
    let mut csv = String::from("t,sigma,rho,mu,right,left\n");
    for &t in &points {
        let class = iv.classify(t)?;
        let _ = writeln!(
            csv,
            "{t:?},{:?},{:?},{:?},{},{}",
            iv.sigma(t)?,
            iv.rho(t)?,
            iv.graininess(t)?,
            side(class.right),
            side(class.left)
        );
    }
    let mut report = Report::default();
    report
        .set("segments", iv.scale().segments().len())
        .set("discrete", iv.scale().is_discrete())
        .set("min", iv.a())
        .set("max", iv.b())
        .set("points", points.len());
    let mut out = Outcome::new(format!("classified {} points", points.len()));
    out.file("classify.csv", csv).file("classify.report", report.render());
    Ok(out)
}

pub fn integrate(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.integrate.as_ref().ok_or_else(|| missing("integrate"))?;
    let iv = interval(ctx)?;
    let u = catalog::grid_function(cfg, &iv, ctx.base)?;
    let anti = antiderivative(&u, &vec![0.0; u.dim()])?;
    let total = anti.row(anti.len() - 1).to_vec();
    let mut deriv = String::from("t");
    for k in 1..=u.dim() {
        let _ = write!(deriv, ",d{k}");
    }
    deriv.push('\n');
    for &t in u.grid().nodes() {
        match delta_derivative(&u, t) {
            Ok(d) => {
                let _ = write!(deriv, "{t:?}");
                for v in d {
                    let _ = write!(deriv, ",{v:?}");
                }
                deriv.push('\n');
            }
            Err(Error::NotInKappa { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let mut report = Report::default();
    report
        .set("a", iv.a())
        .set("b", iv.b())
        .set("nodes", u.len())
        .set("dim", u.dim())
        .set("integral", total.as_slice());
    let mut out = Outcome::new(format!("integral over [{}, {}] = {:?}", iv.a(), iv.b(), total));
    out.file("integrate.csv", anti.to_csv())
        .file("derivative.csv", deriv)
        .file("integrate.report", report.render());
    Ok(out)
}

pub fn rdcheck(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.rdcheck.as_ref().ok_or_else(|| missing("rdcheck"))?;
    let eps = cfg.eps.ok_or_else(|| invalid("[rdcheck] needs `eps`"))?;
    let iv = interval(ctx)?;
    let u = catalog::grid_function(cfg, &iv, ctx.base)?;
    let mut report = Report::default();
    report.set("a", iv.a()).set("b", iv.b()).set("eps", eps).set("nodes", u.len());
    let mut out;
    match check_rd_continuity(&u, eps)? {
        RdCheck::Partition(p) => {
            report.set("verdict", "rd-continuous").set("balls", p.centers.len());
            let mut csv = String::from("center,radius\n");
            for (c, r) in p.centers.iter().zip(&p.radii) {
                let _ = writeln!(csv, "{c:?},{r:?}");
            }
            out = Outcome::new(format!("rd-continuous at eps = {eps}: {} balls", p.centers.len()));
            out.file("rdcheck.csv", csv);
        }
        RdCheck::Violation(v) => {
            report
                .set("verdict", "violation")
                .set("center", v.center)
                .set("s", v.s)
                .set("t", v.t)
                .set("distance", v.distance);
            out = Outcome::new(format!("violation at t = {:?} (jump {:?})", v.center, v.distance));
        }
    }
    out.file("rdcheck.report", report.render());
    Ok(out)
}

fn ivp(ctx: &Context<'_>, cfg: &IvpCfg) -> Result<(IvpSpec, bool), CliError> {
    let iv = interval(ctx)?;
    let rhs = catalog::rhs(&cfg.rhs)?;
    let norm = match cfg.norm {
        Some(NormCfg::Max) => Norm::Max,
        _ => Norm::Euclidean,
    };
    let (m, estimated) = match cfg.m {
        Some(m) => (m, false),
        None => {
            let grid = Grid::build(&iv, cfg.h)?;
            let m = estimate_bound(rhs.as_ref(), &grid, &cfg.u0, cfg.beta, norm, 16, ctx.seed);
            // a vanishing rhs still needs a positive bound
            (if m > 0.0 { m } else { f64::MIN_POSITIVE }, true)
        }
    };
    if rhs.dim() != cfg.u0.len() {
        return Err(invalid(format!("rhs has dimension {} but u0 has {}", rhs.dim(), cfg.u0.len())));
    }
    let spec = IvpSpec::new(rhs, cfg.u0.clone(), iv, cfg.beta, m)?
        .with_norm(norm)
        .with_policy(policy(cfg.window));
    Ok((spec, estimated))
}

pub fn solve(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.solve.as_ref().ok_or_else(|| missing("solve"))?;
    if cfg.k_max.is_some() || cfg.tol.is_some() || cfg.xk_samples.is_some() || cfg.xk_k_max.is_some() {
        return Err(invalid("k_max, tol, xk_samples and xk_k_max belong to [picard]"));
    }
    let (spec, estimated) = ivp(ctx, cfg)?;
    let trace = step_solve(&spec, cfg.h)?;
    let mut report = Report::default();
    report.set("m", spec.m).set("m_estimated", estimated);
    trace_report(&mut report, &trace);
    let mut out = Outcome::new(format!(
        "solved on [{:?}, {:?}] with {} nodes, residual {:e}",
        trace.window.a,
        trace.window.end,
        trace.u.len(),
        trace.residual
    ));
    out.file("solve.csv", trace.u.to_csv())
        .file("solve.dat", emit_plot_data(&trace))
        .file("solve.report", report.render());
    Ok(out)
}

pub fn picard(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.picard.as_ref().ok_or_else(|| missing("picard"))?;
    let (spec, estimated) = ivp(ctx, cfg)?;
    let k_max = cfg.k_max.unwrap_or(50);
    let tol = cfg.tol.unwrap_or(1e-10);
    let (trace, diag) = picard_iterate(&spec, cfg.h, k_max, tol)?;
    let status = match diag.status {
        PicardStatus::Converged => "converged",
        PicardStatus::MaxIterations => "max_iterations",
        PicardStatus::Diverged => "diverged",
    };
    let mut report = Report::default();
    report
        .set("m", spec.m)
        .set("m_estimated", estimated)
        .set("status", status)
        .set("iterations", diag.iterations())
        .set("last_gap", diag.iterate_gaps.last().copied());
    trace_report(&mut report, &trace);
    let mut gaps = String::from("k,gap,vk\n");
    for (k, (g, v)) in diag.iterate_gaps.iter().zip(&diag.vk_trace).enumerate() {
        let _ = writeln!(gaps, "{},{g:?},{v:?}", k + 1);
    }
    let mut out = Outcome::new(format!("picard {status} after {} iterations", diag.iterations()));
    if let Some(samples) = cfg.xk_samples {
        let xk = xk_diagnostics(&spec, cfg.h, samples, cfg.xk_k_max.unwrap_or(5), ctx.seed)?;
        let mut csv = String::from("t");
        for k in 0..xk.v.len() {
            let _ = write!(csv, ",v{k}");
        }
        csv.push('\n');
        for (i, t) in xk.nodes.iter().enumerate() {
            let _ = write!(csv, "{t:?}");
            for v in &xk.v {
                let _ = write!(csv, ",{:?}", v[i]);
            }
            csv.push('\n');
        }
        report
            .set("xk_samples", samples)
            .set("xk_nonincreasing", xk.nonincreasing())
            .set("xk_worst_increase", xk.worst_increase)
            .set("xk_measure", "sampled diameter (lower bound)");
        out.file("xk.csv", csv);
    }
    out.file("picard.csv", trace.u.to_csv())
        .file("picard.dat", emit_plot_data(&trace))
        .file("picard_gaps.csv", gaps)
        .file("picard.report", report.render());
    if diag.status == PicardStatus::Diverged {
        out.failure = Some(CliError::Numerical(format!(
            "picard iteration diverged after {} iterations",
            diag.iterations()
        )));
    }
    Ok(out)
}

pub fn mnc(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.mnc.as_ref().ok_or_else(|| missing("mnc"))?;
    if cfg.family.is_empty() {
        return Err(invalid("[mnc] family must not be empty"));
    }
    let family = cfg
        .family
        .iter()
        .map(|s| TailedSequence::parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    let chi = hausdorff_c0(&family);
    let mut report = Report::default();
    report.set("members", family.len()).set("chi", chi);
    for (k, x) in family.iter().enumerate() {
        report
            .set(format!("member_{}_sup_norm", k + 1), x.sup_norm())
            .set(format!("member_{}_tail_limit", k + 1), x.tail_limit())
            .set(format!("member_{}_in_c0", k + 1), x.in_c0());
    }
    let len = cfg.profile_len.unwrap_or(20);
    let mut csv = String::from("k");
    for m in 1..=family.len() {
        let _ = write!(csv, ",s{m}");
    }
    csv.push('\n');
    for k in 1..=len {
        let _ = write!(csv, "{k}");
        for x in &family {
            let _ = write!(csv, ",{:?}", x.profile(k));
        }
        csv.push('\n');
    }
    if let Some(trials) = cfg.axiom_trials.filter(|&t| t > 0) {
        let layout = C0Layout::new(
            3,
            vec![TailShape::Geometric { r: 0.5 }, TailShape::ConstUntil { k0: 6 }, TailShape::Persistent],
        )?;
        let mut gen = FamilyGenerator::new(layout.dim(), ctx.seed);
        let axioms = axiom_suite(&HausdorffC0 { layout }, &mut gen, trials);
        for o in &axioms.outcomes {
            report
                .set(format!("axiom_{}", o.name), if o.passed() { "pass" } else { "fail" })
                .set(format!("axiom_{}_worst", o.name), o.worst);
        }
    }
    let mut out = Outcome::new(format!("chi = {chi:?} over {} members", family.len()));
    out.file("mnc.csv", csv).file("mnc.report", report.render());
    Ok(out)
}

pub fn kamke(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.kamke.as_ref().ok_or_else(|| missing("kamke"))?;
    let iv = interval(ctx)?;
    let q = catalog::scalar_grid_function(cfg.q.as_ref(), cfg.q_csv.as_deref(), &iv, cfg.h, ctx.base)?;
    let spec = KamkeSpec::linear(q.clone())?;
    let axioms = axiom_check(&spec, cfg.x_max.unwrap_or(1.0), cfg.eps.unwrap_or(0.1))?;
    let probe = gronwall_uniqueness_probe(&spec, cfg.epsilon.unwrap_or(1e-6))?;
    let mut report = Report::default();
    report
        .set("rd_continuous", axioms.rd_continuous)
        .set("equicontinuous", axioms.equicontinuous)
        .set("nonnegative", axioms.nonnegative)
        .set("vanishes_at_zero", axioms.vanishes_at_zero)
        .set("uniqueness_verified", axioms.uniqueness_verified)
        .set("all_passed", axioms.all_passed())
        .set("zero_max", probe.zero_max)
        .set("epsilon", probe.epsilon)
        .set("envelope_end", probe.envelope.row(probe.envelope.len() - 1)[0]);
    if let Some((t, x)) = axioms.negative_at {
        report.set("negative_at_t", t).set("negative_at_x", x);
    }
    let mut csv = String::from("t,q,zero,envelope\n");
    for i in 0..q.len() {
        let _ = writeln!(
            csv,
            "{:?},{:?},{:?},{:?}",
            q.grid().nodes()[i],
            q.row(i)[0],
            probe.zero_solution.row(i)[0],
            probe.envelope.row(i)[0]
        );
    }
    let mut out = Outcome::new(format!(
        "kamke axioms {}; zero solution max {:e}",
        if axioms.all_passed() { "pass" } else { "fail" },
        probe.zero_max
    ));
    out.file("kamke.csv", csv).file("kamke.report", report.render());
    Ok(out)
}

fn parabolic_spec(ctx: &Context<'_>, cfg: &ParabolicCfg) -> Result<ParabolicSpec, CliError> {
    let iv = interval(ctx)?;
    let dx = cfg.dx.unwrap_or(1.0);
    if !(dx > 0.0) {
        return Err(invalid(format!("dx must be positive, got {dx}")));
    }
    let mut spec = ParabolicSpec::new(iv.clone(), cfg.n, cfg.beta)?
        .with_dx(dx)
        .with_policy(policy(cfg.window))
        .with_decay(match cfg.decay {
            Some(DecayCfg::Geometric) => DecayMode::Geometric,
            Some(DecayCfg::Polynomial) => DecayMode::Polynomial,
            _ => DecayMode::None,
        });
    spec.phi = catalog::profile(&cfg.phi, dx, ctx.base)?;
    if let Some(f) = &cfg.forcing {
        spec.forcing = catalog::forcing(f, dx, ctx.base)?;
    }
    if let Some(psi) = &cfg.psi {
        let psi = catalog::scalar(psi);
        spec.psi = Arc::new(move |t| psi(t));
    }
    let p = match cfg.p {
        Some(p) => p,
        None => {
            let grid = Grid::build(&iv, cfg.h)?;
            let mut p = 0.0f64;
            for &t in grid.nodes() {
                for k in 1..=cfg.n {
                    p = p.max((spec.forcing)(t, k as f64 * dx).abs());
                }
            }
            p
        }
    };
    Ok(spec.with_bounds(p, cfg.q.unwrap_or(4.0)))
}

pub fn parabolic(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.parabolic.as_ref().ok_or_else(|| missing("parabolic"))?;
    if cfg.n_list.is_some() {
        return Err(invalid("n_list belongs to [study]"));
    }
    let spec = parabolic_spec(ctx, cfg)?;
    let (trace, tails) = solve_parabolic(&spec, cfg.h)?;
    let hyp = verify_hypotheses(
        &spec,
        trace.u.grid(),
        cfg.hypothesis_samples.unwrap_or(200),
        cfg.eps.unwrap_or(0.1),
        ctx.seed,
    )?;
    let mut report = Report::default();
    report
        .set("n", spec.n)
        .set("p", spec.p)
        .set("q", spec.q)
        .set("phi_norm", spec.phi_norm())
        .set("m", ball_bound(spec.p, spec.q, spec.phi_norm(), spec.beta));
    trace_report(&mut report, &trace);
    for (m, sup) in &tails.bands {
        report.set(format!("tail_band_{m}"), *sup);
    }
    report
        .set("hyp_lipschitz_max", hyp.lipschitz_max)
        .set("hyp_lipschitz_ok", hyp.lipschitz_ok)
        .set("hyp_p_max", hyp.p_max)
        .set("hyp_p_ok", hyp.p_ok)
        .set("hyp_decay_ok", hyp.decay_ok)
        .set("hyp_growth_excess", hyp.growth_excess)
        .set("hyp_growth_ok", hyp.growth_ok)
        .set("hyp_rd_continuous", hyp.rd_violation.is_none())
        .set("hyp_all_passed", hyp.all_passed());
    let mut out = Outcome::new(format!(
        "parabolic N = {} on [{:?}, {:?}], hypotheses {}",
        spec.n,
        trace.window.a,
        trace.window.end,
        if hyp.all_passed() { "pass" } else { "fail" }
    ));
    out.file("parabolic.csv", trace.u.to_csv())
        .file("parabolic.dat", emit_plot_data(&trace))
        .file("parabolic.report", report.render());
    Ok(out)
}

pub fn study(ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg.study.as_ref().ok_or_else(|| missing("study"))?;
    let n_list = cfg.n_list.as_ref().ok_or_else(|| invalid("[study] needs `n_list`"))?;
    let spec = parabolic_spec(ctx, cfg)?;
    let rows = convergence_study(&spec, n_list, cfg.h)?;
    let mut csv = String::from("n_coarse,n_fine,difference\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{:?}", r.n_coarse, r.n_fine, r.difference);
    }
    let monotone = rows.windows(2).all(|w| w[1].difference < w[0].difference);
    let mut report = Report::default();
    report.set("rows", rows.len()).set("monotone", monotone);
    let mut out = Outcome::new(format!("{} comparisons, monotone = {monotone}", rows.len()));
    out.file("study.csv", csv).file("study.report", report.render());
    Ok(out)
}
