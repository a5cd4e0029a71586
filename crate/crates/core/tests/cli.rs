use std::collections::HashMap;
use std::path::{Path, PathBuf};

use lp_greeks::analytics::{PricingPoint, Strategy};
use lp_greeks::cli::{run, EXIT_CONFIG, EXIT_DOMAIN, EXIT_OK, EXIT_VERIFY_FAILED};
use lp_greeks::config::Scenario;
use lp_greeks::fd::{fd_greek, Greek};
use lp_greeks::figures::figure_ids;
use lp_greeks::payoff::impermanent_loss;
use lp_greeks::verify::closed_form_greeks;
use tempfile::TempDir;

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn lpgreeks(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("lpgreeks").chain(args.iter().copied()), &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `field,value` or `greek,value,...` records keyed by the first column.
fn fields(csv: &str) -> HashMap<String, Vec<String>> {
    csv.lines()
        .skip(1)
        .filter_map(|l| {
            let mut cols = l.split(',').map(str::to_string);
            cols.next().map(|k| (k, cols.collect()))
        })
        .collect()
}

fn num(v: &str) -> f64 {
    v.parse().unwrap()
}

#[test]
fn price_of_the_shipped_scenarios() {
    let o = lpgreeks(&["price", "--config", s(&shipped("locked_lp.json"))]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let f = fields(&o.out);
    assert_eq!(f["strategy"][0], "locked-lp");
    assert!((num(&f["price"][0]) - 10_307.444_431_899_49).abs() < 1e-8);
    for key in ["beta", "gamma", "v0", "s0", "spot", "t", "maturity", "tau", "r_f", "sigma", "phi"] {
        assert!(f.contains_key(key), "{key} missing");
    }

    let o = lpgreeks(&["price", "--config", s(&shipped("ig_7day.json")), "--strategy", "ig"]);
    assert_eq!(o.code, EXIT_OK);
    let f = fields(&o.out);
    assert!((num(&f["price"][0]) - 11.736_715_913_895_5).abs() < 1e-10);
    assert_eq!(num(&f["k"][0]), 1000.0);
}

#[test]
fn flat_market_prices_at_par() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "flat.json",
        r#"{"market": {"r_f": 0, "sigma": 0, "phi": 0},
            "position": {"v0": 2500, "s0": 40, "t": 0, "maturity": 1, "locked": true},
            "ig": {"k": 40}, "spot": 40}"#,
    );
    for (strategy, want) in [("unlocked-lp", 2500.0), ("locked-lp", 2500.0), ("ig", 0.0)] {
        let o = lpgreeks(&["price", "--config", s(&cfg), "--strategy", strategy]);
        assert_eq!(o.code, EXIT_OK, "{}", o.err);
        assert_eq!(num(&fields(&o.out)["price"][0]), want, "{strategy}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("price.csv");
    let o = lpgreeks(&["price", "--config", s(&shipped("locked_lp.json")), "--out", s(&out)]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), o.out);
}

#[test]
fn greeks_tables() {
    let o = lpgreeks(&["greeks", "--config", s(&shipped("locked_lp.json")), "--strategy", "unlocked-lp"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let f = fields(&o.out);
    assert_eq!(f.len(), 7);
    assert_eq!(num(&f["vega"][0]), 0.0);
    assert_eq!(num(&f["rho"][0]), 0.0);

    let o = lpgreeks(&["greeks", "--config", s(&shipped("ig_7day.json")), "--strategy", "ig"]);
    let f = fields(&o.out);
    assert!(num(&f["delta"][0]) > 0.0);
    assert_eq!(num(&f["vega"][1]), num(&f["vega"][0]) / 100.0);
    assert_eq!(num(&f["theta"][1]), num(&f["theta"][0]) / 365.0);
    assert_eq!(num(&f["rho"][1]), num(&f["rho"][0]) / 100.0);
}

#[test]
fn locked_greeks_agree_with_finite_differences() {
    let cfg = shipped("locked_lp.json");
    let o = lpgreeks(&["greeks", "--config", s(&cfg), "--strategy", "locked-lp"]);
    let f = fields(&o.out);
    let point = Scenario::load(&cfg).unwrap().point(Strategy::LockedLp);
    for g in Greek::ALL {
        let fd = fd_greek(Strategy::LockedLp, &point, g, g.default_bump()).unwrap();
        let cf = num(&f[g.name()][0]);
        let tol = if g == Greek::Gamma { 1e-5 } else { 1e-6 };
        assert!((fd - cf).abs() <= tol * cf.abs(), "{g}: {fd} vs {cf}");
    }
}

#[test]
fn hedge_cancels_gamma_and_vega() {
    let o = lpgreeks(&["hedge", "--config", s(&shipped("hedge_1y.json"))]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let f = fields(&o.out);
    assert_eq!(num(&f["delta"][2]), 5.0);
    assert_eq!(num(&f["gamma"][2]), 0.0);
    assert_eq!(num(&f["vega"][2]), 0.0);
    assert!((num(&f["theta"][2]) - num(&f["theta"][3])).abs() < 1e-10 * num(&f["theta"][3]).abs());
    assert!((num(&f["rho"][2]) - num(&f["rho"][3])).abs() < 1e-10 * num(&f["rho"][3]).abs());
}

#[test]
fn hedge_sums_do_not_depend_on_spot() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(shipped("hedge_1y.json")).unwrap();
    let moved = write_config(&dir, "moved.json", &text.replace("\"spot\": 1000", "\"spot\": 5000"));
    let a = fields(&lpgreeks(&["hedge", "--config", s(&shipped("hedge_1y.json"))]).out);
    let o = lpgreeks(&["hedge", "--config", s(&moved)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let b = fields(&o.out);
    assert_ne!(a["delta"][0], b["delta"][0]);
    for g in ["delta", "theta", "rho"] {
        let (x, y) = (num(&a[g][2]), num(&b[g][2]));
        assert!((x - y).abs() <= 1e-10 * x.abs(), "{g}: {x} vs {y}");
    }
}

#[test]
fn hedge_preconditions() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(shipped("hedge_1y.json")).unwrap();
    let cases = [
        text.replace("\"k\": 1000", "\"k\": 1100"),
        text.replace("\"locked\": true", "\"locked\": false"),
        text.replace("\"k\": 1000, \"maturity\": 1", "\"k\": 1000, \"maturity\": 0.5"),
        text.replace("\"k\": 1000, \"maturity\": 1", "\"k\": 1000, \"maturity\": 1, \"v0\": 5000"),
    ];
    for (i, body) in cases.iter().enumerate() {
        assert_ne!(body, &text, "case {i} did not change the file");
        let cfg = write_config(&dir, &format!("bad{i}.json"), body);
        let o = lpgreeks(&["hedge", "--config", s(&cfg)]);
        assert_eq!(o.code, EXIT_CONFIG, "case {i}: {}", o.out);
        assert!(o.err.contains("precondition"), "case {i}: {}", o.err);
    }
    let o = lpgreeks(&["hedge", "--config", s(&shipped("locked_lp.json"))]);
    assert_eq!(o.code, EXIT_CONFIG);
}

fn closed_form(id: &str, point: &PricingPoint, strategy: Strategy) -> (f64, f64) {
    let series = id.split_once('-').unwrap().1;
    if series == "price" {
        let p = strategy.price(point).unwrap();
        return (p, p);
    }
    let g = closed_form_greeks(strategy, point).unwrap();
    match series {
        "delta" => (g.delta, g.delta),
        "delta-pct" => (g.delta_pct, g.delta_pct),
        "gamma" => (g.gamma, g.gamma),
        "gamma-pct" => (g.gamma_pct, g.gamma_pct),
        "vega" => (g.vega, g.vega / 100.0),
        "theta" => (g.theta, g.theta / 365.0),
        "rho" => (g.rho, g.rho / 100.0),
        _ => unreachable!(),
    }
}

#[test]
fn every_figure_matches_its_closed_form() {
    let dir = TempDir::new().unwrap();
    let cfg = shipped("locked_lp.json");
    let scenario = Scenario::load(&cfg).unwrap();
    for id in figure_ids() {
        let out = dir.path().join(format!("{id}.csv"));
        let o = lpgreeks(&["figure", "--config", s(&cfg), "--figure", &id, "--out", s(&out)]);
        assert_eq!(o.code, EXIT_OK, "{id}: {}", o.err);
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(!text.contains('\r'));
        let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').map(num).collect()).collect();
        assert!(rows.len() >= 200, "{id}");
        // five rows spread across the curve
        for i in [3, 77, 150, 222, rows.len() - 5] {
            let r = &rows[i];
            let want = if id == "il-curve" {
                let il = impermanent_loss(r[0]).unwrap();
                (il, il)
            } else {
                let strategy = match id.split('-').next().unwrap() {
                    "unlocked" => Strategy::UnlockedLp,
                    "lp" => Strategy::LockedLp,
                    _ => Strategy::ImpermanentGain,
                };
                let point = PricingPoint { spot: r[0], ..scenario.point(strategy) };
                closed_form(&id, &point, strategy)
            };
            assert_eq!((r[1], r[2]), want, "{id} row {i}");
        }
    }
}

#[test]
fn figure_errors() {
    let o = lpgreeks(&["figure", "--config", s(&shipped("locked_lp.json")), "--figure", "lp-vanna"]);
    assert_eq!(o.code, EXIT_CONFIG);
    assert!(o.err.contains("il-curve") && o.err.contains("ig-rho"), "{}", o.err);
    let o = lpgreeks(&["figure", "--config", s(&shipped("locked_lp.json"))]);
    assert_eq!(o.code, EXIT_CONFIG);
}

#[test]
fn figure_goes_to_stdout_without_out() {
    let o = lpgreeks(&["figure", "--config", s(&shipped("ig_7day.json")), "--figure", "ig-gamma"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.starts_with("s_t,value,display\n"));
    assert!(o.out.lines().skip(1).all(|l| num(l.split(',').nth(1).unwrap()) > 0.0));
}

#[test]
fn table_and_grid() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("table.csv");
    let o = lpgreeks(&["table", "--config", s(&shipped("hedge_1y.json")), "--out", s(&out)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert!(o.out.contains("Impermanent Gain"));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("greek,unlocked_lp,locked_lp,impermanent_gain\n"));

    let o = lpgreeks(&["grid", "--config", s(&shipped("ig_7day.json"))]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert!(o.out.starts_with("strike,weight,kind\n"));
    assert!(o.out.lines().count() > 100);
}

#[test]
fn verify_passes_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = lpgreeks(&["verify", "--config", s(&shipped("locked_lp.json")), "--paths", "100000", "--out", s(out)]);
        assert_eq!(o.code, EXIT_OK, "{}{}", o.out, o.err);
        assert!(o.out.contains("0 failed"));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("check,closed_form,mc_mean,std_error,z_score,pass\n"));
    assert!(!text.contains(",false"));
}

#[test]
fn verify_seed_changes_the_report() {
    let run_with = |seed: &str| {
        lpgreeks(&["verify", "--config", s(&shipped("ig_7day.json")), "--paths", "20000", "--seed", seed]).out
    };
    assert_ne!(run_with("1"), run_with("2"));
}

#[test]
fn verify_without_mc_block_uses_defaults_only_when_asked() {
    let o = lpgreeks(&["verify", "--config", s(&shipped("hedge_1y.json"))]);
    assert_eq!(o.code, EXIT_CONFIG, "{}", o.out);
    let o = lpgreeks(&["verify", "--config", s(&shipped("hedge_1y.json")), "--paths", "50000"]);
    assert_eq!(o.code, EXIT_OK, "{}{}", o.out, o.err);
}

#[test]
fn verify_rejects_zero_paths() {
    let o = lpgreeks(&["verify", "--config", s(&shipped("ig_7day.json")), "--paths", "0"]);
    assert_eq!(o.code, EXIT_CONFIG);
}

#[test]
fn a_tiny_verify_run_can_fail() {
    // one path: every Monte Carlo error is zero, so any bias is infinitely significant
    let o = lpgreeks(&["verify", "--config", s(&shipped("ig_7day.json")), "--paths", "1"]);
    assert_eq!(o.code, EXIT_VERIFY_FAILED, "{}", o.out);
    assert!(o.out.contains("FAIL"));
}

#[test]
fn config_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let broken = write_config(&dir, "broken.json", "{\n  \"market\": {\"r_f\": 0.03,, }\n}");
    let o = lpgreeks(&["price", "--config", s(&broken)]);
    assert_eq!(o.code, EXIT_CONFIG);
    assert!(o.err.contains("line 2"), "{}", o.err);

    let unknown = write_config(
        &dir,
        "unknown.json",
        r#"{"market": {"r_f": 0.03, "sigma": 0.7, "vol": 1}, "position": {"v0": 1, "s0": 1, "maturity": 1}, "spot": 1}"#,
    );
    let o = lpgreeks(&["price", "--config", s(&unknown)]);
    assert_eq!(o.code, EXIT_CONFIG);
    assert!(o.err.contains("vol"), "{}", o.err);

    let o = lpgreeks(&["price", "--config", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.code, EXIT_CONFIG);
    assert_eq!(lpgreeks(&["price"]).code, EXIT_CONFIG);
    assert_eq!(lpgreeks(&["launch", "--config", "x"]).code, EXIT_CONFIG);
    let o = lpgreeks(&["price", "--config", s(&shipped("ig_7day.json")), "--strategy", "straddle"]);
    assert_eq!(o.code, EXIT_CONFIG);

    let help = lpgreeks(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("verify"));
}

#[test]
fn domain_errors_exit_with_three() {
    // a locked position may be valued before its deposit, an unlocked one not
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "early.json",
        r#"{"market": {"r_f": 0.03, "sigma": 0.7},
            "position": {"v0": 1000, "s0": 10, "t": -0.5, "maturity": 1, "locked": true},
            "spot": 10}"#,
    );
    assert_eq!(lpgreeks(&["price", "--config", s(&cfg)]).code, EXIT_OK);
    let o = lpgreeks(&["price", "--config", s(&cfg), "--strategy", "unlocked-lp"]);
    assert_eq!(o.code, EXIT_DOMAIN, "{}", o.err);
    assert!(o.err.contains("domain"));
}
