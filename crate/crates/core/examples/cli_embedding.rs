//! Driving the command-line front end in-process.

use lp_greeks::cli::run;

fn main() {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/hedge_1y.json");
    for args in [
        vec!["lpgreeks", "price", "--config", config, "--strategy", "ig"],
        vec!["lpgreeks", "hedge", "--config", config],
    ] {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.clone(), &mut out, &mut err);
        println!("$ {} -> exit {code}", args[1..].join(" "));
        print!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
    }
}
