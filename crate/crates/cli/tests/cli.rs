mod common;

use common::{matches_golden, with_config, GOLDEN_CASES};
use stablegov::commands::{cmd_equilibrium, cmd_value, CSV_HEADER};
use stablegov::format::sig12;
use stablegov::RunConfig;
use stablegov_core::attack::security_report;
use stablegov_core::valuation::{shortfall_put, vault_gradients};
use stablegov_core::{solve_equilibrium, Position};

fn pinned() -> RunConfig {
    RunConfig::load(&common::data("pinned.json")).unwrap()
}

#[test]
fn golden_outputs() {
    for (file, cmd, extra, code) in GOLDEN_CASES {
        let run = with_config(cmd, "pinned.json", extra);
        assert_eq!(run.code, code, "{cmd}: {}", run.stderr);
        assert!(
            matches_golden(file, &run.stdout),
            "{cmd} differs from tests/golden/{file}"
        );
    }
}

#[test]
fn sweep_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let run = with_config("sweep", "pinned.json", &["--out", out.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, with_config("sweep", "pinned.json", &[]).stdout);
}

#[test]
fn oracle_check_is_reproducible() {
    let a = with_config("oracle-check", "pinned.json", &[]);
    let b = with_config("oracle-check", "pinned.json", &[]);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.contains("phi_check=PASS"));
    assert!(a.stdout.contains("delta_eq_check=PASS"));
}

#[test]
fn infeasible_parameters_exit_two() {
    let run = with_config("equilibrium", "a2_violated.json", &[]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.contains("a2_holds=false"));
    let margin = run
        .stdout
        .lines()
        .find_map(|l| l.strip_prefix("a2_margin="))
        .unwrap();
    assert!(margin.parse::<f64>().unwrap() < 0.0);
    assert!(run.stdout.contains("infeasible_reason=a2"));

    let run = with_config("attack", "a2_violated.json", &[]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("no fee stream"), "{}", run.stderr);

    let run = with_config("equilibrium", "high_volatility.json", &[]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.contains("a1_holds=false"));
}

#[test]
fn input_errors_exit_one() {
    let run = with_config("value", "pinned.json", &["--F", "0", "--delta", "0.05"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("F > 0"), "{}", run.stderr);

    let run = with_config("attack", "model_only.json", &[]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("attack"));

    let run = with_config("sweep", "bad_axis.json", &[]);
    assert_eq!(run.code, 1);
    for axis in [
        "N", "sigma", "b", "beta", "u", "zeta", "gamma", "alpha", "r",
    ] {
        assert!(run.stderr.contains(&format!("`{axis}`")), "{}", run.stderr);
    }

    let run = with_config("oracle-check", "few_samples.json", &[]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("n_samples"));

    let run = with_config("equilibrium", "missing.json", &[]);
    assert_eq!(run.code, 1);
}

#[test]
fn sweep_shapes() {
    let run = with_config("sweep", "sweep_two.json", &[]);
    assert_eq!(run.code, 0);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], CSV_HEADER);
    // sigma = 0.9 is past the volatility bound: blank optimum, infeasible.
    assert!(lines[2].starts_with("0.9,"));
    assert!(lines[2].contains(",false,"));

    let run = with_config("sweep", "sweep_n.json", &[]);
    let stars: Vec<&str> = run
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(stars.len(), 6);
    assert!(stars.iter().all(|s| *s == stars[0]));
}

#[test]
fn alpha_sweep_flips_once_at_min_alpha() {
    let run = with_config("sweep", "sweep_alpha_fine.json", &[]);
    let rows: Vec<(f64, bool)> = run
        .stdout
        .lines()
        .skip(1)
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (cells[0].parse().unwrap(), cells[11] == "true")
        })
        .collect();
    let flips = rows.windows(2).filter(|w| w[0].1 != w[1].1).count();
    assert_eq!(flips, 1);

    let config = pinned();
    let eq = solve_equilibrium(&config.model).unwrap();
    let min_alpha = security_report(&config.model, &config.attack.unwrap(), &eq)
        .unwrap()
        .min_alpha;
    let first_secure = rows.iter().find(|r| r.1).unwrap().0;
    assert!(first_secure >= min_alpha && first_secure - min_alpha <= 0.1);
}

#[test]
fn leverage_bound_regime_reported() {
    let run = with_config("equilibrium", "low_beta.json", &[]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("regime=LEVERAGE_BOUND"));
    assert!(run.stdout.contains("F_star=5\n"));
}

#[test]
fn value_report_is_a_thin_adapter() {
    let config = pinned();
    let text = cmd_value(&config, 50.0, 0.05).unwrap().text;
    let pos = Position::new(50.0, 0.05).unwrap();
    let t = shortfall_put(&config.model, &pos);
    let g = vault_gradients(&config.model, &pos);
    assert!(text.contains(&format!("P={}\n", sig12(t.put_value))));
    assert!(text.contains(&format!("d2={}\n", sig12(t.d2))));
    assert!(text.contains(&format!("dV_ddelta={}\n", sig12(g.dv_ddelta))));
    let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
    assert_eq!(
        keys,
        [
            "F",
            "delta",
            "P",
            "B",
            "d1",
            "d2",
            "V",
            "G",
            "dP_dF",
            "dP_ddelta",
            "dV_dF",
            "dV_ddelta"
        ]
    );
}

#[test]
fn equilibrium_report_orders_thresholds() {
    let text = cmd_equilibrium(&pinned()).unwrap().text;
    let get = |k: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{k}=")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(get("delta_th") < get("delta_beta") && get("delta_beta") < get("delta_star"));
    assert!(text.contains("regime=INTERIOR"));
}

#[test]
fn min_alpha_round_trip() {
    let mut config = pinned();
    let eq = solve_equilibrium(&config.model).unwrap();
    let attack = config.attack.unwrap();
    let min_alpha = security_report(&config.model, &attack, &eq)
        .unwrap()
        .min_alpha;
    config.attack = Some(
        attack
            .with(stablegov_core::AttackAxis::Alpha, min_alpha)
            .unwrap(),
    );
    let text = stablegov::commands::cmd_attack(&config).unwrap().text;
    let margin: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("margin="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(margin.abs() <= 1e-9 * config.model.n());
}
