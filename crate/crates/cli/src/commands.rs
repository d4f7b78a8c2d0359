//! The five subcommands. Each one only wires the config into library calls
//! and formats what comes back.

use stablegov_core::attack::security_report;
use stablegov_core::equilibrium::{
    collateral_factor_bound, delta_beta, delta_th, phi, solve_equilibrium, volatility_margin,
    AssumptionReport, Equilibrium,
};
use stablegov_core::oracle::{
    grid_gov_best_delta, grid_vault_best_f, mc_price, mc_shortfall, mc_vault_objective, Agreement,
    GridResult, McEstimate, SeBands,
};
use stablegov_core::valuation::{
    gov_objective, put_sensitivities, shortfall_put, stablecoin_price, vault_gradients,
    vault_objective,
};
use stablegov_core::{AttackParams, Error as ModelError, ModelParams, Position};

use crate::config::{RunConfig, SweepAxis};
use crate::error::{CliError, Status};
use crate::format::{sig12, Report};

/// Column order of `sweep` output. Part of the interface.
pub const CSV_HEADER: &str =
    "axis_value,delta_beta,delta_th,delta_star,F_star,G_star,V_star,B,feasible,regime,margin,secure";

#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub status: Status,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            status: Status::Ok,
        }
    }
}

pub fn cmd_value(config: &RunConfig, f: f64, delta: f64) -> Result<Output, CliError> {
    if !(f > 0.0) {
        return Err(CliError::Config(format!("F = {f} violates F > 0")));
    }
    let p = &config.model;
    let pos = Position::new(f, delta)?;
    let terms = shortfall_put(p, &pos);
    let sens = put_sensitivities(p, &pos);
    let grad = vault_gradients(p, &pos);
    let text = Report::new()
        .num("F", f)
        .num("delta", delta)
        .num("P", terms.put_value)
        .num("B", stablecoin_price(p, &pos)?)
        .num("d1", terms.d1)
        .num("d2", terms.d2)
        .num("V", vault_objective(p, &pos))
        .num("G", gov_objective(&pos))
        .num("dP_dF", sens.dp_df)
        .num("dP_ddelta", sens.dp_ddelta)
        .num("dV_dF", grad.dv_df)
        .num("dV_ddelta", grad.dv_ddelta)
        .finish();
    Ok(Output::ok(text))
}

fn push_assumptions(r: &mut Report, a: &AssumptionReport) {
    r.flag("a1_holds", a.a1_volatility.holds)
        .num("a1_margin", a.a1_volatility.margin)
        .flag("a2_holds", a.a2_collateral_factor.holds)
        .num("a2_margin", a.a2_collateral_factor.margin)
        .flag("a3_holds", a.a3_participation.holds)
        .num("a3_margin", a.a3_participation.margin);
}

/// Names of everything that makes `eq` infeasible, comma separated.
fn infeasibility_reasons(p: &ModelParams, eq: &Equilibrium) -> String {
    let a = &eq.assumptions;
    let t = &eq.thresholds;
    let mut reasons = Vec::new();
    if !a.a1_volatility.holds {
        reasons.push("a1");
    }
    if !a.a2_collateral_factor.holds {
        reasons.push("a2");
    }
    if !a.a3_participation.holds {
        reasons.push("a3");
    }
    if !(t.delta_th < t.delta_beta && t.delta_beta < t.delta_star && t.delta_star <= p.b()) {
        reasons.push("threshold_order");
    }
    if !eq.participates {
        reasons.push("participation");
    }
    reasons.join(",")
}

pub fn cmd_equilibrium(config: &RunConfig) -> Result<Output, CliError> {
    let p = &config.model;
    let eq = match solve_equilibrium(p) {
        Ok(eq) => eq,
        Err(ModelError::VolatilityTooHigh { .. }) => return volatility_failure(p),
        Err(e) => return Err(e.into()),
    };
    let mut r = Report::new();
    r.num("delta_beta", eq.thresholds.delta_beta)
        .num("delta_th", eq.thresholds.delta_th)
        .num("delta_star", eq.thresholds.delta_star);
    push_assumptions(&mut r, &eq.assumptions);
    r.text("regime", eq.regime.as_str())
        .num("delta", eq.delta)
        .num("F_star", eq.issuance)
        .num("G_star", eq.gov_value)
        .num("V_star", eq.vault_value)
        .num("B", eq.price)
        .flag("participates", eq.participates)
        .flag("feasible", eq.feasible);
    let status = if eq.feasible {
        Status::Ok
    } else {
        r.text("infeasible_reason", &infeasibility_reasons(p, &eq));
        Status::Infeasible
    };
    Ok(Output {
        text: r.finish(),
        status,
    })
}

/// Report for parameters where the interior optimum does not exist.
fn volatility_failure(p: &ModelParams) -> Result<Output, CliError> {
    let a1 = volatility_margin(p);
    let a2 = collateral_factor_bound(p) - p.beta();
    let text = Report::new()
        .num("delta_beta", delta_beta(p)?)
        .num("delta_th", delta_th(p))
        .flag("a1_holds", false)
        .num("a1_margin", a1)
        .flag("a2_holds", a2 > 0.0)
        .num("a2_margin", a2)
        .flag("feasible", false)
        .text("infeasible_reason", "a1")
        .finish();
    Ok(Output {
        text,
        status: Status::Infeasible,
    })
}

fn feasible_equilibrium(p: &ModelParams) -> Result<Equilibrium, CliError> {
    let eq = solve_equilibrium(p)?;
    if !eq.feasible {
        return Err(CliError::Infeasible(format!(
            "no fee stream to defend: equilibrium fails {}",
            infeasibility_reasons(p, &eq)
        )));
    }
    Ok(eq)
}

pub fn cmd_attack(config: &RunConfig) -> Result<Output, CliError> {
    let attack = config
        .attack
        .ok_or_else(|| CliError::Config("attack command needs an `attack` block".into()))?;
    let p = &config.model;
    let eq = feasible_equilibrium(p)?;
    let s = security_report(p, &attack, &eq)?;
    let text = Report::new()
        .num("delta_star", eq.delta)
        .num("F_star", eq.issuance)
        .num("gov_perpetuity", s.gov_perpetuity)
        .num("attack_payoff", s.attack_payoff)
        .num("defense_value", s.defense_value)
        .num("margin", s.margin)
        .flag("cost_form_holds", s.defense_value >= s.attack_payoff)
        .num("required_perpetuity", s.required_perpetuity)
        .flag(
            "perpetuity_form_holds",
            s.gov_perpetuity >= s.required_perpetuity,
        )
        .flag("secure", s.secure)
        .num("min_alpha", s.min_alpha)
        .num("max_gamma", s.max_gamma)
        .num("min_zeta", s.min_zeta)
        .flag("min_zeta_attainable", s.min_zeta_attainable)
        .finish();
    Ok(Output::ok(text))
}

fn with_model_axis(p: &ModelParams, axis: SweepAxis, v: f64) -> Result<ModelParams, ModelError> {
    let (n, s, b, beta, u) = (p.n(), p.sigma(), p.b(), p.beta(), p.u());
    match axis {
        SweepAxis::N => ModelParams::new(v, s, b, beta, u),
        SweepAxis::Sigma => ModelParams::new(n, v, b, beta, u),
        SweepAxis::B => ModelParams::new(n, s, v, beta, u),
        SweepAxis::Beta => ModelParams::new(n, s, b, v, u),
        SweepAxis::U => ModelParams::new(n, s, b, beta, v),
        _ => Ok(*p),
    }
}

fn with_attack_axis(a: &AttackParams, axis: SweepAxis, v: f64) -> Result<AttackParams, ModelError> {
    use stablegov_core::AttackAxis;
    let axis = match axis {
        SweepAxis::Zeta => AttackAxis::Zeta,
        SweepAxis::Gamma => AttackAxis::Gamma,
        SweepAxis::Alpha => AttackAxis::Alpha,
        SweepAxis::R => AttackAxis::R,
        _ => return Ok(*a),
    };
    a.with(axis, v)
}

fn sweep_row(
    p: &ModelParams,
    attack: Option<&AttackParams>,
    value: f64,
) -> Result<String, CliError> {
    let mut cells = vec![sig12(value), sig12(delta_beta(p)?), sig12(delta_th(p))];
    let eq = match solve_equilibrium(p) {
        Ok(eq) => eq,
        Err(ModelError::VolatilityTooHigh { .. }) => {
            cells.extend(["", "", "", "", "", "false", "", "", ""].map(String::from));
            return Ok(cells.join(","));
        }
        Err(e) => return Err(e.into()),
    };
    cells.extend([
        sig12(eq.thresholds.delta_star),
        sig12(eq.issuance),
        sig12(eq.gov_value),
        sig12(eq.vault_value),
        sig12(eq.price),
        eq.feasible.to_string(),
        eq.regime.as_str().to_string(),
    ]);
    match attack {
        Some(a) if eq.feasible => {
            let s = security_report(p, a, &eq)?;
            cells.push(sig12(s.margin));
            cells.push(s.secure.to_string());
        }
        _ => cells.extend([String::new(), String::new()]),
    }
    Ok(cells.join(","))
}

/// CSV text: header plus one row per sweep point in ascending axis order.
pub fn cmd_sweep(config: &RunConfig) -> Result<Output, CliError> {
    let sweep = config
        .sweep
        .ok_or_else(|| CliError::Config("sweep command needs a `sweep` block".into()))?;
    if sweep.axis.is_attack() && config.attack.is_none() {
        return Err(CliError::Config(format!(
            "sweep over `{}` needs an `attack` block",
            sweep.axis
        )));
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for v in sweep.points() {
        let p = with_model_axis(&config.model, sweep.axis, v)?;
        let attack = config
            .attack
            .map(|a| with_attack_axis(&a, sweep.axis, v))
            .transpose()?;
        out.push_str(&sweep_row(&p, attack.as_ref(), v)?);
        out.push('\n');
    }
    Ok(Output::ok(out))
}

fn mc_lines(r: &mut Report, key: &str, exact: f64, est: &McEstimate, bands: SeBands) -> Agreement {
    let verdict = est.agreement(exact, bands);
    r.num(&format!("{key}_closed"), exact)
        .num(&format!("{key}_mc"), est.mean)
        .num(&format!("{key}_se"), est.std_error)
        .num(&format!("{key}_z"), est.z_score(exact))
        .text(
            &format!("{key}_check"),
            match verdict {
                Agreement::Within => "PASS",
                Agreement::Soft => "FAIL",
                Agreement::Hard => "FAIL_HARD",
            },
        );
    verdict
}

fn grid_lines(r: &mut Report, key: &str, exact: f64, grid: &GridResult) -> bool {
    let pass = (grid.arg_best - exact).abs() <= grid.step;
    r.num(&format!("{key}_closed"), exact)
        .num(&format!("{key}_grid"), grid.arg_best)
        .num(&format!("{key}_step"), grid.step)
        .text(&format!("{key}_check"), if pass { "PASS" } else { "FAIL" });
    pass
}

/// Monte Carlo and grid checks at `(F, delta)`, by default the equilibrium
/// point. Exits non-zero on a 5-SE miss or a grid miss.
pub fn cmd_oracle_check(
    config: &RunConfig,
    f: Option<f64>,
    delta: Option<f64>,
) -> Result<Output, CliError> {
    let oracle = config
        .oracle
        .ok_or_else(|| CliError::Config("oracle-check command needs an `oracle` block".into()))?;
    let p = &config.model;
    let eq = solve_equilibrium(p)?;
    let f = f.unwrap_or(eq.issuance);
    let delta = delta.unwrap_or(eq.delta);
    if !(f > 0.0) {
        return Err(CliError::Config(format!(
            "oracle point needs F > 0 (got {f}); pass --F and --delta"
        )));
    }
    if !(delta > 0.0 && delta < p.b()) {
        return Err(CliError::Config(format!(
            "oracle point needs 0 < delta < b (got {delta})"
        )));
    }
    let pos = Position::new(f, delta)?;
    let (n, seed) = (oracle.n_samples, oracle.seed);
    let bands = SeBands::default();

    let mut r = Report::new();
    r.num("F", f)
        .num("delta", delta)
        .num("n_samples", n as f64)
        .text("seed", &seed.to_string());
    let verdicts = [
        mc_lines(
            &mut r,
            "P",
            shortfall_put(p, &pos).put_value,
            &mc_shortfall(p, &pos, n, seed)?,
            bands,
        ),
        mc_lines(
            &mut r,
            "B",
            stablecoin_price(p, &pos)?,
            &mc_price(p, &pos, n, seed)?,
            bands,
        ),
        mc_lines(
            &mut r,
            "V",
            vault_objective(p, &pos),
            &mc_vault_objective(p, &pos, n, seed)?,
            bands,
        ),
    ];
    let grids = [
        grid_lines(
            &mut r,
            "phi",
            phi(p, delta),
            &grid_vault_best_f(p, delta, oracle.n_grid_points)?,
        ),
        grid_lines(
            &mut r,
            "delta_eq",
            eq.delta,
            &grid_gov_best_delta(p, oracle.n_grid_points)?,
        ),
    ];
    let hard = verdicts.contains(&Agreement::Hard) || grids.contains(&false);
    let status = if hard { Status::Failed } else { Status::Ok };
    Ok(Output {
        text: r.finish(),
        status,
    })
}
