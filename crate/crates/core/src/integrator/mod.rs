//! Time stepping: SSP RK2 start-up followed by the variable step-size
//! multistep main loop, with greedy step-size selection.

mod problem;

pub use problem::{Evaluation, FnProblem, SemiDiscrete};

use std::collections::VecDeque;

use thiserror::Error;

use crate::controller::{check_fe_ratio, check_h_bound, ControllerError, ControllerParams, Order};
use crate::formula::{make_second_order, make_third_order, FormulaCoefficients, FormulaError, RatioHistory};
use crate::spatial::SpatialError;
use crate::Extended;

/// Default cap on repetitions of a single step.
pub const MAX_RETRIES: usize = 20;

/// SSP coefficient of the two-stage RK2 starter.
const STARTER_SSP: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegratorError {
    #[error("starting step {step} still rejected after {retries} retries")]
    StartupFailure { step: usize, retries: usize },
    #[error("step {step} still rejected after {retries} halvings")]
    RejectionLimit { step: usize, retries: usize },
    #[error("non-finite state after step {step}")]
    NonFiniteState { step: usize },
    #[error("right-hand side failed: {0}")]
    Rhs(#[from] SpatialError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Controller(#[from] ControllerError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Starter,
    Lmm,
}

impl MethodTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::Starter => "starter",
            MethodTag::Lmm => "lmm",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub n: usize,
    /// Time at the end of the step.
    pub t: f64,
    pub h: f64,
    /// CFL number `h · a_max / dx`.
    pub nu: f64,
    /// Monotone functional (total variation) of the new state.
    pub tv: f64,
    pub rejections: usize,
    pub tag: MethodTag,
    /// Shortened to land on the final time.
    pub clipped: bool,
    /// `C_n` of the formula used (multistep steps only).
    pub ssp_coeff: Option<f64>,
    /// `μ_n` of the step (multistep steps only).
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub t_final: f64,
    pub initial_tv: f64,
    pub steps: Vec<StepRecord>,
    pub final_state: Vec<f64>,
}

impl Trajectory {
    pub fn lmm_steps(&self) -> impl Iterator<Item = &StepRecord> {
        self.steps.iter().filter(|s| s.tag == MethodTag::Lmm)
    }

    pub fn starter_time(&self) -> f64 {
        self.steps
            .iter()
            .filter(|s| s.tag == MethodTag::Starter)
            .map(|s| s.h)
            .sum()
    }

    pub fn total_rejections(&self) -> usize {
        self.steps.iter().map(|s| s.rejections).sum()
    }
}

/// One stored state of the multistep history.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    pub u: Vec<f64>,
    pub t: f64,
    /// Step that produced this state (zero for the initial state).
    pub h: f64,
    pub f: Vec<f64>,
    /// `h_FE` of `u`, capped at the run's time span when unbounded.
    pub h_fe: f64,
    /// `h_FE` was unbounded (no wave motion).
    pub fe_unbounded: bool,
}

/// The last `k` states, oldest first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepHistory {
    entries: VecDeque<HistoryEntry>,
}

impl StepHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: HistoryEntry, capacity: usize) {
        self.entries.push_back(entry);
        while self.entries.len() > capacity {
            self.entries.pop_front();
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &VecDeque<HistoryEntry> {
        &self.entries
    }

    pub fn last(&self) -> Option<&HistoryEntry> {
        self.entries.back()
    }

    /// `μ`, the smallest stored `h_FE`.
    pub fn mu(&self) -> f64 {
        self.entries.iter().map(|e| e.h_fe).fold(f64::INFINITY, f64::min)
    }

    /// Step sizes `h_{n-k+2}, …, h_{n-1}` entering a `k`-step formula together with `h_n`.
    fn formula_steps(&self, h: f64) -> Vec<f64> {
        let mut steps: Vec<f64> = self.entries.iter().skip(1).map(|e| e.h).collect();
        steps.push(h);
        steps
    }

    /// Sum of the `k - 1` most recent steps.
    fn recent_sum(&self) -> f64 {
        self.entries.iter().skip(1).map(|e| e.h).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub controller: ControllerParams,
    pub t0: f64,
    pub t_final: f64,
    /// Requested first step, clipped to `γ · h_FE(u_0)`.
    pub h1: f64,
    pub max_retries: usize,
}

impl IntegratorConfig {
    pub fn new(controller: ControllerParams, t_final: f64) -> Self {
        Self {
            controller,
            t0: 0.0,
            t_final,
            h1: 0.1,
            max_retries: MAX_RETRIES,
        }
    }

    fn validate(&self) -> Result<(), IntegratorError> {
        let c = &self.controller;
        if !(self.t_final > self.t0) || !self.t_final.is_finite() || !self.t0.is_finite() {
            return Err(IntegratorError::Config(format!(
                "need t0 < t_final, got [{}, {}]",
                self.t0, self.t_final
            )));
        }
        for (name, v) in [("h1", self.h1), ("gamma", c.gamma), ("cfl_fe", c.cfl_fe)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(IntegratorError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    fn span(&self) -> f64 {
        self.t_final - self.t0
    }
}

/// Smallest remaining interval treated as zero when approaching `t_final`.
fn end_tolerance(config: &IntegratorConfig) -> f64 {
    1e-13 * config.t_final.abs().max(config.span())
}

fn cap_h_fe(h_fe: Extended, config: &IntegratorConfig) -> f64 {
    h_fe.capped(config.span())
}

fn check_finite(u: &[f64], step: usize) -> Result<(), IntegratorError> {
    if u.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(IntegratorError::NonFiniteState { step })
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// One step of the two-stage second-order SSP Runge–Kutta method.
pub fn ssprk2_step<P: SemiDiscrete + ?Sized>(problem: &P, t: f64, u: &[f64], h: f64) -> Result<Vec<f64>, IntegratorError> {
    if !(h > 0.0) {
        return Err(IntegratorError::Config(format!("step size must be positive, got {h}")));
    }
    let f0 = problem.evaluate(t, u, 1.0)?;
    Ok(ssprk2_stages(problem, t, u, &f0.rhs, h, 1.0)?.0)
}

/// Returns the new state and `h_FE` at the intermediate stage.
fn ssprk2_stages<P: SemiDiscrete + ?Sized>(
    problem: &P,
    t: f64,
    u: &[f64],
    f0: &[f64],
    h: f64,
    cfl_fe: f64,
) -> Result<(Vec<f64>, Extended), IntegratorError> {
    let mut stage = u.to_vec();
    axpy(&mut stage, h, f0);
    let f1 = problem.evaluate(t + h, &stage, cfl_fe)?;
    axpy(&mut stage, h, &f1.rhs);
    let out = u.iter().zip(&stage).map(|(a, b)| 0.5 * a + 0.5 * b).collect();
    Ok((out, f1.h_fe))
}

/// `u_n = Σ_j (α_j u_{n-k+j} + h_n β_j f(u_{n-k+j}))` from the stored history.
pub fn lmm_step(formula: &FormulaCoefficients, history: &StepHistory, h: f64) -> Result<Vec<f64>, IntegratorError> {
    if formula.k() != history.len() {
        return Err(IntegratorError::Config(format!(
            "formula has {} steps but the history holds {}",
            formula.k(),
            history.len()
        )));
    }
    if !(h > 0.0) {
        return Err(IntegratorError::Config(format!("step size must be positive, got {h}")));
    }
    let len = history.last().map_or(0, |e| e.u.len());
    let mut out = vec![0.0; len];
    for (j, entry) in history.entries().iter().enumerate() {
        let a = formula.alphas[j];
        let b = formula.betas[j];
        if a != 0.0 {
            axpy(&mut out, a, &entry.u);
        }
        if b != 0.0 {
            axpy(&mut out, h * b, &entry.f);
        }
    }
    Ok(out)
}

struct Runner<'a, P: SemiDiscrete + ?Sized> {
    problem: &'a P,
    config: IntegratorConfig,
    history: StepHistory,
    steps: Vec<StepRecord>,
}

impl<'a, P: SemiDiscrete + ?Sized> Runner<'a, P> {
    fn start(problem: &'a P, u0: &[f64], config: IntegratorConfig) -> Result<Self, IntegratorError> {
        config.validate()?;
        if u0.len() != problem.len() {
            return Err(IntegratorError::Config(format!(
                "initial state has length {}, problem expects {}",
                u0.len(),
                problem.len()
            )));
        }
        check_finite(u0, 0)?;
        let eval = problem.evaluate(config.t0, u0, config.controller.cfl_fe)?;
        let mut history = StepHistory::new();
        history.push(
            HistoryEntry {
                u: u0.to_vec(),
                t: config.t0,
                h: 0.0,
                f: eval.rhs,
                h_fe: cap_h_fe(eval.h_fe, &config),
                fe_unbounded: !eval.h_fe.is_finite(),
            },
            usize::MAX,
        );
        Ok(Self {
            problem,
            config,
            history,
            steps: Vec::new(),
        })
    }

    fn last(&self) -> &HistoryEntry {
        self.history.last().expect("history is never empty")
    }

    fn remaining(&self) -> f64 {
        self.config.t_final - self.last().t
    }

    fn done(&self) -> bool {
        self.remaining() <= end_tolerance(&self.config)
    }

    /// Shorten `h` to land on `t_final`.
    fn clip(&self, h: f64) -> (f64, bool) {
        let rest = self.remaining();
        if h >= rest - end_tolerance(&self.config) {
            (rest, true)
        } else {
            (h, false)
        }
    }

    fn evaluate(&self, t: f64, u: &[f64]) -> Result<(Vec<f64>, f64, bool), IntegratorError> {
        let e = self.problem.evaluate(t, u, self.config.controller.cfl_fe)?;
        Ok((e.rhs, cap_h_fe(e.h_fe, &self.config), !e.h_fe.is_finite()))
    }

    /// Starting step `n` by SSP RK2. Returns the accepted entry, its CFL
    /// number, the rejection count and whether it was clipped, plus the
    /// proposal `γ · C_0 · h_FE(u_n)` for the next step.
    fn starter_step(&self, n: usize, mut h: f64, third_order: bool) -> Result<(HistoryEntry, StepRecord, f64), IntegratorError> {
        let params = self.config.controller;
        let prev = self.last().clone();
        let mut rejections = 0;
        loop {
            let (h_try, clipped) = self.clip(h);
            let (u, stage_fe) = ssprk2_stages(self.problem, prev.t, &prev.u, &prev.f, h_try, params.cfl_fe)?;
            check_finite(&u, n)?;
            let t = prev.t + h_try;
            let (f, h_fe, fe_unbounded) = self.evaluate(t, &u)?;
            let speed_fe = prev.h_fe.min(cap_h_fe(stage_fe, &self.config));
            let nu = params.cfl_fe * h_try / speed_fe;
            let proposal = params.gamma * STARTER_SSP * h_fe;

            let mut retry = None;
            if third_order && params.enforce_conditions && !fe_unbounded {
                // The forward-Euler ratio rule takes precedence when both fail.
                if !prev.fe_unbounded && !check_fe_ratio(prev.h_fe, h_fe, params.rho_fe) {
                    retry = Some(h_try / 2.0);
                } else if !check_h_bound(h_try, h_fe, params.rho) {
                    retry = Some(params.gamma * STARTER_SSP * params.rho * h_fe);
                }
            }
            if retry.is_none() && nu > STARTER_SSP * params.cfl_fe {
                // Also shrink by the observed excess so the retry makes progress.
                retry = Some(proposal.min(params.gamma * h_try * STARTER_SSP * params.cfl_fe / nu));
            }
            match retry {
                Some(next) if !clipped || next < h_try => {
                    rejections += 1;
                    if rejections > self.config.max_retries {
                        return Err(IntegratorError::StartupFailure {
                            step: n,
                            retries: self.config.max_retries,
                        });
                    }
                    h = next;
                }
                _ => {
                    let tv = self.problem.monotone_functional(&u);
                    let record = StepRecord {
                        n,
                        t,
                        h: h_try,
                        nu,
                        tv,
                        rejections,
                        tag: MethodTag::Starter,
                        clipped,
                        ssp_coeff: None,
                        mu: None,
                    };
                    let entry = HistoryEntry {
                        u,
                        t,
                        h: h_try,
                        f,
                        h_fe,
                        fe_unbounded,
                    };
                    return Ok((entry, record, proposal));
                }
            }
        }
    }

    fn run_starter(&mut self, count: usize, third_order: bool) -> Result<Option<f64>, IntegratorError> {
        let params = self.config.controller;
        let mut h = self.config.h1.min(params.gamma * STARTER_SSP * self.last().h_fe);
        for n in 1..=count {
            if self.done() {
                return Ok(None);
            }
            let (entry, record, proposal) = self.starter_step(n, h, third_order)?;
            self.history.push(entry, usize::MAX);
            self.steps.push(record);
            h = proposal;
        }
        Ok(Some(h))
    }

    fn lmm_loop(&mut self, k: usize, order: Order) -> Result<(), IntegratorError> {
        let params = self.config.controller;
        let mut n = self.steps.len();
        while !self.done() {
            n += 1;
            let mu = self.history.mu();
            let mut h = params.greedy_step(self.history.recent_sum(), mu)?;
            let mut rejections = 0;
            loop {
                let (h_try, clipped) = self.clip(h);
                let ratios = RatioHistory::from_steps(&self.history.formula_steps(h_try))?;
                let formula = match order {
                    Order::Second => make_second_order(k, &ratios)?,
                    Order::Third => make_third_order(k, &ratios)?,
                };
                let u = lmm_step(&formula, &self.history, h_try)?;
                check_finite(&u, n)?;
                let t = self.last().t + h_try;
                let (f, h_fe, fe_unbounded) = self.evaluate(t, &u)?;
                let prev = self.last();
                let bounded = !fe_unbounded && !prev.fe_unbounded;
                if order == Order::Third
                    && params.enforce_conditions
                    && bounded
                    && !check_fe_ratio(prev.h_fe, h_fe, params.rho_fe)
                {
                    rejections += 1;
                    if rejections > self.config.max_retries {
                        return Err(IntegratorError::RejectionLimit {
                            step: n,
                            retries: self.config.max_retries,
                        });
                    }
                    h = h_try / 2.0;
                    continue;
                }
                let tv = self.problem.monotone_functional(&u);
                self.steps.push(StepRecord {
                    n,
                    t,
                    h: h_try,
                    nu: params.cfl_fe * h_try / mu,
                    tv,
                    rejections,
                    tag: MethodTag::Lmm,
                    clipped,
                    ssp_coeff: formula.ssp_coeff.finite(),
                    mu: Some(mu),
                });
                self.history.push(
                    HistoryEntry {
                        u,
                        t,
                        h: h_try,
                        f,
                        h_fe,
                        fe_unbounded,
                    },
                    k,
                );
                break;
            }
        }
        Ok(())
    }

    fn finish(self, initial_tv: f64) -> Trajectory {
        let final_state = self.last().u.clone();
        Trajectory {
            t0: self.config.t0,
            t_final: self.config.t_final,
            initial_tv,
            steps: self.steps,
            final_state,
        }
    }
}

fn run_multistep<P: SemiDiscrete + ?Sized>(problem: &P, u0: &[f64], config: &IntegratorConfig, order: Order) -> Result<Trajectory, IntegratorError> {
    let k = config.controller.k;
    let initial_tv = problem.monotone_functional(u0);
    let mut runner = Runner::start(problem, u0, *config)?;
    if runner.run_starter(k - 1, order == Order::Third)?.is_some() {
        runner.lmm_loop(k, order)?;
    }
    Ok(runner.finish(initial_tv))
}

/// Second-order variable step-size SSP multistep run (`k >= 3`).
pub fn run_second_order<P: SemiDiscrete + ?Sized>(problem: &P, u0: &[f64], config: &IntegratorConfig) -> Result<Trajectory, IntegratorError> {
    let c = &config.controller;
    if c.order != Order::Second || c.k < 3 {
        return Err(IntegratorError::Config(format!(
            "second-order run needs order 2 and k >= 3, got order {} and k = {}",
            c.order.as_u32(),
            c.k
        )));
    }
    run_multistep(problem, u0, config, Order::Second)
}

/// Third-order variable step-size SSP multistep run (`k >= 4`).
pub fn run_third_order<P: SemiDiscrete + ?Sized>(problem: &P, u0: &[f64], config: &IntegratorConfig) -> Result<Trajectory, IntegratorError> {
    let c = &config.controller;
    if c.order != Order::Third || c.k < 4 {
        return Err(IntegratorError::Config(format!(
            "third-order run needs order 3 and k >= 4, got order {} and k = {}",
            c.order.as_u32(),
            c.k
        )));
    }
    run_multistep(problem, u0, config, Order::Third)
}

/// SSP RK2 throughout, each step `γ · h_FE` of the current state.
pub fn run_ssprk2<P: SemiDiscrete + ?Sized>(problem: &P, u0: &[f64], config: &IntegratorConfig) -> Result<Trajectory, IntegratorError> {
    let initial_tv = problem.monotone_functional(u0);
    let mut runner = Runner::start(problem, u0, *config)?;
    runner.run_starter(usize::MAX, false)?;
    Ok(runner.finish(initial_tv))
}

/// Dispatch on the controller order.
pub fn run<P: SemiDiscrete + ?Sized>(problem: &P, u0: &[f64], config: &IntegratorConfig) -> Result<Trajectory, IntegratorError> {
    match config.controller.order {
        Order::Second => run_second_order(problem, u0, config),
        Order::Third => run_third_order(problem, u0, config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(lambda: f64) -> FnProblem<impl Fn(f64, &[f64]) -> Vec<f64>> {
        FnProblem::new(1, move |_, u: &[f64]| vec![lambda * u[0]], Extended::Finite(1.0))
    }

    #[test]
    fn ssprk2_examples() {
        let zero = FnProblem::new(2, |_, u: &[f64]| vec![0.0; u.len()], Extended::Unbounded);
        assert_eq!(ssprk2_step(&zero, 0.0, &[1.0, -2.0], 0.3).unwrap(), vec![1.0, -2.0]);

        let constant = FnProblem::new(2, |_, _: &[f64]| vec![1.5, -0.5], Extended::Unbounded);
        let u = ssprk2_step(&constant, 0.0, &[1.0, 1.0], 0.2).unwrap();
        assert!((u[0] - 1.3).abs() < 1e-15 && (u[1] - 0.9).abs() < 1e-15);

        let u = ssprk2_step(&linear(-1.0), 0.0, &[1.0], 0.1).unwrap();
        assert!((u[0] - 0.905).abs() < 1e-15);
    }

    fn history_of(values: &[f64], steps: &[f64]) -> StepHistory {
        let mut h = StepHistory::new();
        let mut t = 0.0;
        for (v, s) in values.iter().zip(steps) {
            t += s;
            h.push(
                HistoryEntry {
                    u: vec![*v],
                    t,
                    h: *s,
                    f: vec![0.0],
                    h_fe: 1.0,
                    fe_unbounded: false,
                },
                values.len(),
            );
        }
        h
    }

    #[test]
    fn fixed_step_combinations() {
        let hist = history_of(&[1.0, 2.0, 3.0], &[1.0; 3]);
        let r = RatioHistory::from_steps(&[1.0; 3]).unwrap();
        let f = make_second_order(3, &r).unwrap();
        let u = lmm_step(&f, &hist, 1.0).unwrap();
        assert!((u[0] - (0.75 * 3.0 + 0.25 * 1.0)).abs() < 1e-15);

        let hist = history_of(&[1.0, 2.0, 3.0, 4.0], &[1.0; 4]);
        let r = RatioHistory::from_steps(&[1.0; 4]).unwrap();
        let f = make_third_order(4, &r).unwrap();
        let u = lmm_step(&f, &hist, 1.0).unwrap();
        assert!((u[0] - (16.0 / 27.0 * 4.0 + 11.0 / 27.0 * 1.0)).abs() < 1e-15);

        assert!(lmm_step(&f, &history_of(&[1.0; 3], &[1.0; 3]), 1.0).is_err());
    }

    fn exact_history(k: usize, h: f64) -> StepHistory {
        // u' = u with exact values at t = -(k-1)h, …, 0.
        let mut hist = StepHistory::new();
        for j in 0..k {
            let t = -((k - 1 - j) as f64) * h;
            hist.push(
                HistoryEntry {
                    u: vec![t.exp()],
                    t,
                    h,
                    f: vec![t.exp()],
                    h_fe: 1.0,
                    fe_unbounded: false,
                },
                k,
            );
        }
        hist
    }

    #[test]
    fn second_order_local_error_is_cubic() {
        let errors: Vec<f64> = [0.02, 0.01]
            .iter()
            .map(|&h| {
                let hist = exact_history(3, h);
                let r = RatioHistory::from_steps(&[h, h, h]).unwrap();
                let f = make_second_order(3, &r).unwrap();
                (lmm_step(&f, &hist, h).unwrap()[0] - h.exp()).abs()
            })
            .collect();
        let slope = (errors[0] / errors[1]).log2();
        assert!((slope - 3.0).abs() < 0.1, "{errors:?} {slope}");
    }

    #[test]
    fn zero_field_keeps_state() {
        let zero = FnProblem::new(3, |_, u: &[f64]| vec![0.0; u.len()], Extended::Unbounded);
        for (k, order) in [(3, Order::Second), (4, Order::Third)] {
            let cfg = IntegratorConfig::new(ControllerParams::new(k, order).unwrap(), 1.0);
            let traj = run(&zero, &[1.0, -2.0, 0.5], &cfg).unwrap();
            for (a, b) in traj.final_state.iter().zip([1.0, -2.0, 0.5]) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
            let mut prev = traj.initial_tv;
            for s in &traj.steps {
                assert!(s.tv <= prev * (1.0 + 1e-15));
                prev = prev.max(s.tv);
            }
            assert_eq!(traj.total_rejections(), 0);
            assert!((traj.steps.last().unwrap().t - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unbounded_h_fe_is_capped_by_span() {
        let zero = FnProblem::new(1, |_, u: &[f64]| vec![0.0; u.len()], Extended::Unbounded);
        let cfg = IntegratorConfig::new(ControllerParams::new(3, Order::Second).unwrap(), 2.0);
        let traj = run(&zero, &[1.0], &cfg).unwrap();
        assert_eq!(traj.steps[0].h, 0.1);
        assert!(traj.steps.iter().all(|s| s.nu <= 0.5 + 1e-12));
    }

    #[test]
    fn rejects_bad_configs() {
        let p = linear(-1.0);
        let mut cfg = IntegratorConfig::new(ControllerParams::new(3, Order::Second).unwrap(), 1.0);
        assert!(run_third_order(&p, &[1.0], &cfg).is_err());
        cfg.t_final = 0.0;
        assert!(run(&p, &[1.0], &cfg).is_err());
        let cfg = IntegratorConfig::new(ControllerParams::new(3, Order::Third).unwrap(), 1.0);
        assert!(run(&p, &[1.0], &cfg).is_err());
    }

    #[test]
    fn constant_fe_gives_limit_steps() {
        let p = linear(0.0);
        for (k, order) in [(3, Order::Second), (4, Order::Third)] {
            let params = ControllerParams::new(k, order).unwrap();
            let cfg = IntegratorConfig::new(params, 300.0);
            let traj = run(&p, &[1.0], &cfg).unwrap();
            let h = traj.steps[traj.steps.len() - 2].h;
            assert!((h - params.limit_ssp_coefficient()).abs() < 1e-8, "{k}: {h}");
        }
    }
}
