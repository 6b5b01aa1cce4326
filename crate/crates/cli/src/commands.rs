//! Subcommand implementations. Every table has a fixed header; Monte Carlo
//! commands share the [`RESULT_COLUMNS`] layout.

use std::time::Instant;

use anyhow::{bail, Context, Result};
use lpbridge::bridge::bridge_map;
use lpbridge::cclpd::{cclpd_decode_mode, llr, ChannelModel};
use lpbridge::cover::{csrel_lower_bound_check, thm15_check};
use lpbridge::cslpd::{cs_lpd, norm1, norm2, norm_inf, MeasurementInstance, EXACT_TOL};
use lpbridge::lp::{minimize_l1_exact, ratio_to_f64, Mode};
use lpbridge::nsp::{check_nsp_k, random_sparse};
use lpbridge::pseudoweight::{min_maxfrac_weight, min_pseudoweight_enumerated, weights, WeightKind};
use lpbridge::tanner::{check_expansion, girth, write_alist, TannerGraph};
use lpbridge::{linalg, rng, Gf2Matrix, Gf2Vector};
use rand::Rng;
use rayon::prelude::*;

use crate::config::Config;
use crate::output::{sig, Table};

/// Columns of every Monte Carlo row; `wall_time` is appended with `--timing`.
pub const RESULT_COLUMNS: [&str; 13] = [
    "command",
    "matrix",
    "n",
    "m",
    "param",
    "value",
    "trials",
    "successes",
    "success_rate",
    "mean_error_l1",
    "mean_error_l2",
    "mean_error_linf",
    "seed",
];

pub struct Ctx {
    pub cfg: Config,
    pub timing: bool,
}

impl Ctx {
    fn matrix(&self) -> Result<Gf2Matrix> {
        match &self.cfg.matrix {
            Some(m) => m.load(),
            None => bail!("no matrix given: pass --matrix or set \"matrix\" in the config"),
        }
    }

    fn label(&self) -> String {
        self.cfg.matrix.as_ref().map_or(String::new(), ToString::to_string)
    }

    fn table(&self, header: &[&str]) -> Result<Table> {
        Table::create(self.cfg.out.as_deref(), header)
    }

    fn result_table(&self) -> Result<Table> {
        let mut header: Vec<&str> = RESULT_COLUMNS.to_vec();
        if self.timing {
            header.push("wall_time");
        }
        self.table(&header)
    }
}

/// One Monte Carlo trial: success flag and error vector.
struct Trial {
    success: bool,
    error: Vec<f64>,
}

/// Seed index of trial `t` at grid point `p`.
fn trial_index(p: usize, t: usize) -> u64 {
    ((p as u64) << 32) | t as u64
}

fn run_trials<F>(ctx: &Ctx, p: usize, f: F) -> Result<Vec<Trial>>
where
    F: Fn(&mut rng::Rng) -> Result<Trial> + Sync,
{
    (0..ctx.cfg.trials)
        .into_par_iter()
        .map(|t| f(&mut rng::trial_rng(ctx.cfg.seed, trial_index(p, t))))
        .collect()
}

struct Point<'a> {
    command: &'a str,
    param: &'a str,
    value: String,
}

fn write_result(ctx: &Ctx, table: &mut Table, h: &Gf2Matrix, point: Point, trials: &[Trial], started: Instant) -> Result<()> {
    let count = trials.len() as f64;
    let successes = trials.iter().filter(|t| t.success).count();
    let mean = |f: fn(&[f64]) -> f64| trials.iter().map(|t| f(&t.error)).sum::<f64>() / count;
    let mut row = vec![
        point.command.to_string(),
        ctx.label(),
        h.cols().to_string(),
        h.rows().to_string(),
        point.param.to_string(),
        point.value,
        trials.len().to_string(),
        successes.to_string(),
        sig(successes as f64 / count),
        sig(mean(norm1)),
        sig(mean(norm2)),
        sig(mean(norm_inf)),
        ctx.cfg.seed.to_string(),
    ];
    if ctx.timing {
        row.push(sig(started.elapsed().as_secs_f64()));
    }
    table.row(row)
}

pub fn construct(ctx: &Ctx) -> Result<()> {
    let h = ctx.matrix()?;
    match &ctx.cfg.out {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_alist(&h, std::io::BufWriter::new(file))?;
        }
        None => write_alist(&h, std::io::stdout().lock())?,
    }
    Ok(())
}

pub fn girth_cmd(ctx: &Ctx) -> Result<()> {
    let h = ctx.matrix()?;
    let g = girth(&TannerGraph::from_matrix(&h));
    let mut t = ctx.table(&["matrix", "n", "m", "girth"])?;
    t.row([ctx.label(), h.cols().to_string(), h.rows().to_string(), g.to_string()])?;
    t.finish()
}

pub fn expand_check(ctx: &Ctx) -> Result<()> {
    let (Some(gamma), Some(delta)) = (ctx.cfg.gamma, ctx.cfg.delta) else {
        bail!("expand-check needs gamma and delta");
    };
    let h = ctx.matrix()?;
    let rep = check_expansion(&TannerGraph::from_matrix(&h), gamma, delta, ctx.cfg.cap as u128)?;
    let witness = rep.witness.as_ref().map_or(String::new(), |w| join(w));
    let mut t = ctx.table(&["matrix", "n", "m", "dv", "gamma", "delta", "holds", "subsets_checked", "witness"])?;
    t.row([
        ctx.label(),
        h.cols().to_string(),
        h.rows().to_string(),
        rep.dv.to_string(),
        sig(gamma),
        sig(delta),
        rep.holds().to_string(),
        rep.subsets_checked.to_string(),
        witness,
    ])?;
    t.finish()
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Weights of `omega` when given, otherwise the minima over the matrix's
/// fundamental polytope (vertex enumeration; max-fractional by LP).
pub fn pseudoweight(ctx: &Ctx) -> Result<()> {
    let mut t = ctx.table(&["source", "awgnc", "bsc", "bsc_prime", "bec", "maxfrac"])?;
    if let Some(omega) = &ctx.cfg.omega {
        let w = weights(omega)?;
        t.row(["omega".to_string(), sig(w.awgnc), sig(w.bsc), sig(w.bsc_prime), sig(w.bec), sig(w.maxfrac)])?;
    } else {
        let h = ctx.matrix()?;
        let cap = usize::try_from(ctx.cfg.cap).unwrap_or(usize::MAX);
        let mut row = vec![ctx.label()];
        for kind in [WeightKind::Awgnc, WeightKind::Bsc, WeightKind::BscPrime, WeightKind::Bec] {
            row.push(sig(min_pseudoweight_enumerated(&h, kind, cap)?));
        }
        row.push(sig(min_maxfrac_weight(&h)?));
        t.row(row)?;
    }
    t.finish()
}

pub fn nsp_check(ctx: &Ctx) -> Result<()> {
    let h = ctx.matrix()?;
    let rows = h.to_real_rows();
    let mut ks = ctx.cfg.k_grid(h.cols());
    if ks.is_empty() {
        ks.push(1);
    }
    let mut t = ctx.table(&["matrix", "k", "c", "strict", "holds", "margin", "worst_set"])?;
    for k in ks {
        let cert = check_nsp_k(&rows, k, ctx.cfg.c, ctx.cfg.strict)?;
        t.row([
            ctx.label(),
            k.to_string(),
            sig(ctx.cfg.c),
            ctx.cfg.strict.to_string(),
            cert.holds.to_string(),
            cert.margin().map_or(String::new(), sig),
            cert.worst_case.as_ref().map_or(String::new(), |w| join(&w.s)),
        ])?;
    }
    t.finish()
}

/// Basis pursuit on `k`-sparse vectors for every point of the sparsity grid.
fn recovery_rows(ctx: &Ctx, table: &mut Table, h: &Gf2Matrix, command: &str) -> Result<()> {
    let n = h.cols();
    let rows = h.to_real_rows();
    for (p, k) in ctx.cfg.k_grid(n).into_iter().enumerate() {
        if k > n {
            bail!("k = {k} exceeds n = {n}");
        }
        let started = Instant::now();
        let trials = run_trials(ctx, p, |r| {
            let inst = MeasurementInstance::new(rows.clone(), random_sparse(n, k, r))?;
            let e_hat = match ctx.cfg.mode {
                Mode::Float => cs_lpd(&inst)?.e_hat,
                Mode::Rational => minimize_l1_exact(&inst.h, &inst.s)?.0.iter().map(ratio_to_f64).collect(),
            };
            let error: Vec<f64> = inst.e_true.iter().zip(&e_hat).map(|(a, b)| a - b).collect();
            Ok(Trial { success: norm_inf(&error) <= EXACT_TOL, error })
        })?;
        write_result(ctx, table, h, Point { command, param: "k", value: k.to_string() }, &trials, started)?;
    }
    Ok(())
}

/// LP decoding of the all-zero codeword over every point of the channel grid.
fn decoding_rows(ctx: &Ctx, table: &mut Table, h: &Gf2Matrix, command: &str) -> Result<()> {
    let Some(sweep) = &ctx.cfg.channel else {
        bail!("{command} needs a channel grid");
    };
    let zero = Gf2Vector::zeros(h.cols());
    for (p, (param, value, ch)) in sweep.points().into_iter().enumerate() {
        ch.validate()?;
        let started = Instant::now();
        let trials = run_trials(ctx, p, |r| decode_trial(h, &zero, &ch, ctx.cfg.mode, r))?;
        write_result(ctx, table, h, Point { command, param, value: sig(value) }, &trials, started)?;
    }
    Ok(())
}

fn decode_trial(h: &Gf2Matrix, x: &Gf2Vector, ch: &ChannelModel, mode: Mode, r: &mut rng::Rng) -> Result<Trial> {
    let y = ch.transmit(x, r)?;
    let out = cclpd_decode_mode(h, &llr(ch, &y)?, mode)?;
    let error: Vec<f64> = out.point.iter().zip(x.to_real()).map(|(a, b)| a - b).collect();
    Ok(Trial { success: out.codeword().as_ref() == Some(x), error })
}

pub fn recover_cs(ctx: &Ctx) -> Result<()> {
    let h = ctx.matrix()?;
    if ctx.cfg.k_grid(h.cols()).is_empty() {
        bail!("recover-cs needs k or alpha values");
    }
    let mut t = ctx.result_table()?;
    recovery_rows(ctx, &mut t, &h, "recover-cs")?;
    t.finish()
}

pub fn decode_cc(ctx: &Ctx) -> Result<()> {
    let h = ctx.matrix()?;
    let mut t = ctx.result_table()?;
    decoding_rows(ctx, &mut t, &h, "decode-cc")?;
    t.finish()
}

/// Recovery sweep and decoding sweep on one matrix, in one table.
pub fn experiment(ctx: &Ctx) -> Result<()> {
    let h = ctx.matrix()?;
    let has_k = !ctx.cfg.k_grid(h.cols()).is_empty();
    if !has_k && ctx.cfg.channel.is_none() {
        bail!("experiment needs a sparsity grid, a channel grid, or both");
    }
    let mut t = ctx.result_table()?;
    if has_k {
        recovery_rows(ctx, &mut t, &h, "recover-cs")?;
    }
    if ctx.cfg.channel.is_some() {
        decoding_rows(ctx, &mut t, &h, "decode-cc")?;
    }
    t.finish()
}

/// Random real nullspace vectors through the bridge map.
pub fn bridge_check(ctx: &Ctx) -> Result<()> {
    let h = ctx.matrix()?;
    let n = h.cols();
    let basis: Vec<Vec<f64>> = linalg::nullspace(&linalg::to_rational(&h.to_real_rows()), n)
        .iter()
        .map(|v| v.iter().map(ratio_to_f64).collect())
        .collect();
    let margins: Vec<f64> = (0..ctx.cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::trial_rng(ctx.cfg.seed, trial_index(0, t));
            let mut nu = vec![0.0; n];
            for b in &basis {
                let c: f64 = r.gen_range(-1.0..1.0);
                nu.iter_mut().zip(b).for_each(|(v, bi)| *v += c * bi);
            }
            Ok(bridge_map(&h, &nu)?.margin)
        })
        .collect::<Result<_>>()?;
    let worst = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let passed = margins.iter().filter(|&&m| m >= -1e-9).count();
    let mut t = ctx.table(&["matrix", "trials", "passed", "worst_margin"])?;
    t.row([ctx.label(), margins.len().to_string(), passed.to_string(), sig(worst)])?;
    t.finish()
}

/// Cover reformulation of basis pursuit and the zero-infinity lower bound,
/// on `s = H e` for a random `k`-sparse `e` (first grid value, default 1).
pub fn cover_check(ctx: &Ctx) -> Result<()> {
    let h = ctx.matrix()?;
    let n = h.cols();
    let k = ctx.cfg.k_grid(n).first().copied().unwrap_or(1).min(n);
    let inst = MeasurementInstance::from_gf2(&h, random_sparse(n, k, &mut rng::rng(ctx.cfg.seed)))?;
    let lifted = thm15_check(&h, &inst.s, ctx.cfg.trials, &ctx.cfg.m_set, ctx.cfg.seed)?;
    let zi = csrel_lower_bound_check(&inst.h, &inst.s, ctx.cfg.trials, &ctx.cfg.m_set, ctx.cfg.seed)?;
    let mut t = ctx.table(&["check", "matrix", "samples", "violations", "base_value", "min_statistic"])?;
    t.row([
        "lifted_basis_pursuit".to_string(),
        ctx.label(),
        lifted.covers.to_string(),
        lifted.violations.to_string(),
        sig(lifted.base_value),
        sig(lifted.min_lifted),
    ])?;
    t.row([
        "zero_infinity_bound".to_string(),
        ctx.label(),
        zi.samples.to_string(),
        zi.violations.to_string(),
        sig(zi.base_value),
        sig(zi.min_slack),
    ])?;
    t.finish()
}
