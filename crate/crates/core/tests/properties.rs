use proptest::prelude::*;

use stablegov_core::attack::{security_report, AttackParams};
use stablegov_core::equilibrium::{
    collateral_factor_bound, delta_th, delta_upper_residual, phi_slope, solve_equilibrium,
};
use stablegov_core::math::std_normal_pdf;
use stablegov_core::valuation::{
    put_sensitivities, shortfall_put, stablecoin_price, vault_gradients, vault_objective,
};
use stablegov_core::{ModelParams, Position, Regime};

fn instance() -> impl Strategy<Value = (ModelParams, Position)> {
    (
        1.0..1e4f64,
        0.1..0.75f64,
        0.01..0.5f64,
        0.01..0.99f64,
        0.0..2.0f64,
    )
        .prop_map(|(n, sigma, b, dfrac, ffrac)| {
            let p = ModelParams::new(n, sigma, b, 0.5, 0.0).unwrap();
            let pos = Position::new((ffrac * n).max(1e-3 * n), dfrac * b).unwrap();
            (p, pos)
        })
}

fn rel_close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(floor)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn price_and_handle_identities((p, pos) in instance()) {
        let t = shortfall_put(&p, &pos);
        let b = stablecoin_price(&p, &pos).unwrap();
        prop_assert!((pos.f() * b - (pos.f() - t.put_value)).abs() <= 1e-9 * pos.f());
        let lhs = pos.strike() * std_normal_pdf(t.d2).unwrap();
        let rhs = p.n() * std_normal_pdf(t.d1).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * p.n());
        prop_assert!(t.put_value >= 0.0 && t.put_value <= pos.strike());
    }

    #[test]
    fn sensitivities_match_central_differences((p, pos) in instance()) {
        let (f, d) = (pos.f(), pos.delta());
        let hf = 1e-6 * f;
        let hd = 1e-6 * d.max(1e-3);
        let at = |f: f64, d: f64| Position::new(f, d).unwrap();
        let put = |x: Position| shortfall_put(&p, &x).put_value;
        let val = |x: Position| vault_objective(&p, &x);

        let s = put_sensitivities(&p, &pos);
        let g = vault_gradients(&p, &pos);
        let fd_pf = (put(at(f + hf, d)) - put(at(f - hf, d))) / (2.0 * hf);
        let fd_pd = (put(at(f, d + hd)) - put(at(f, d - hd))) / (2.0 * hd);
        let fd_vf = (val(at(f + hf, d)) - val(at(f - hf, d))) / (2.0 * hf);
        let fd_vd = (val(at(f, d + hd)) - val(at(f, d - hd))) / (2.0 * hd);

        // Floors: the size of the terms that cancel in each derivative.
        let scale_f = d.exp() * p.b().exp();
        prop_assert!(rel_close(s.dp_df, fd_pf, 1e-6, 1e-3 * d.exp()), "{} {}", s.dp_df, fd_pf);
        prop_assert!(rel_close(s.dp_ddelta, fd_pd, 1e-6, 1e-3 * f * d.exp()), "{} {}", s.dp_ddelta, fd_pd);
        prop_assert!(rel_close(g.dv_df, fd_vf, 1e-6, scale_f), "{} {}", g.dv_df, fd_vf);
        prop_assert!(rel_close(g.dv_ddelta, fd_vd, 1e-6, f * scale_f), "{} {}", g.dv_ddelta, fd_vd);
        prop_assert!(g.dv_ddelta < 0.0);
    }

    #[test]
    fn best_response_is_decreasing(sigma in 0.1..0.75f64, b in 0.01..0.5f64, frac in 0.01..0.99f64) {
        let p = ModelParams::new(100.0, sigma, b, 0.5, 0.0).unwrap();
        prop_assert!(phi_slope(&p, frac * b) < 0.0);
    }

    #[test]
    fn equilibrium_structure(sigma in 0.1..0.79f64, b in 0.01..0.5f64, t in 0.01..0.99f64) {
        let probe = ModelParams::new(100.0, sigma, b, 0.5, 0.0).unwrap();
        let beta = t * collateral_factor_bound(&probe).min(1.0);
        let p = ModelParams::new(100.0, sigma, b, beta, 0.0).unwrap();
        let eq = solve_equilibrium(&p).unwrap();
        let th = eq.thresholds;
        prop_assert!(th.delta_th > 0.0 && th.delta_th < b);
        prop_assert!(th.delta_th < th.delta_star && th.delta_star < b);
        prop_assert!(delta_upper_residual(&p, th.delta_star).abs() <= 1e-10);
        prop_assert!(th.delta_beta > th.delta_th, "A2 places delta_beta above delta_th");
        match eq.regime {
            Regime::Interior => prop_assert!(eq.feasible && th.delta_beta < th.delta_star),
            Regime::LeverageBound => prop_assert!(eq.issuance == p.max_issuance()),
        }
        prop_assert!(eq.vault_value >= p.expected_collateral());
        prop_assert_eq!(delta_th(&p), th.delta_th);
    }

    #[test]
    fn collateral_scaling_is_exact(sigma in 0.1..0.75f64, b in 0.01..0.5f64, t in 0.3..0.99f64, k in 0.1..1000f64) {
        let probe = ModelParams::new(100.0, sigma, b, 0.5, 0.0).unwrap();
        let p = ModelParams::new(100.0, sigma, b, t * collateral_factor_bound(&probe).min(1.0), 0.0).unwrap();
        let base = solve_equilibrium(&p).unwrap();
        let eq = solve_equilibrium(&p.scaled(k).unwrap()).unwrap();
        prop_assert!((eq.thresholds.delta_star - base.thresholds.delta_star).abs() <= 1e-10);
        prop_assert!((eq.thresholds.delta_beta - base.thresholds.delta_beta).abs() <= 1e-10);
        prop_assert!(rel_close(eq.issuance, k * base.issuance, 1e-9, 0.0));
        prop_assert!(rel_close(eq.gov_value, k * base.gov_value, 1e-9, 0.0));
        prop_assert!(rel_close(eq.vault_value, k * base.vault_value, 1e-9, 0.0));
    }

    #[test]
    fn attack_condition_forms_and_boundaries(
        zeta in 0.01..1.0f64, gamma in 0.0..1.0f64, alpha in 0.0..200.0f64, r in 0.0..0.99f64,
    ) {
        let p = ModelParams::new(100.0, 0.5, 0.1, 0.75, 0.0).unwrap();
        let eq = solve_equilibrium(&p).unwrap();
        let a = AttackParams::new(zeta, gamma, alpha, r).unwrap();
        let rep = security_report(&p, &a, &eq).unwrap();
        prop_assert_eq!(rep.secure, rep.gov_perpetuity >= rep.required_perpetuity);
        prop_assert_eq!(rep.secure, rep.margin >= 0.0);
        let expected_min_alpha = (rep.attack_payoff - zeta * rep.gov_perpetuity).max(0.0);
        prop_assert_eq!(rep.min_alpha, expected_min_alpha);
        let tol = 1e-9 * p.n();
        if rep.min_alpha > 0.0 {
            let at = security_report(&p, &AttackParams::new(zeta, gamma, rep.min_alpha, r).unwrap(), &eq).unwrap();
            prop_assert!(at.margin.abs() <= tol);
        }
        if rep.max_gamma < 1.0 {
            let at = security_report(&p, &AttackParams::new(zeta, rep.max_gamma, alpha, r).unwrap(), &eq).unwrap();
            prop_assert!(at.margin.abs() <= tol);
        }
        if rep.min_zeta_attainable && rep.min_zeta > 0.0 {
            let at = security_report(&p, &AttackParams::new(rep.min_zeta, gamma, alpha, r).unwrap(), &eq).unwrap();
            prop_assert!(at.margin.abs() <= tol);
        }
    }
}
