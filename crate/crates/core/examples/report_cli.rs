//! Drives the command-line front end in process and captures its JSON.

use coprime_metric::cli;

fn main() {
    let args = ["coprime-metric", "dist", "--a", "3,5", "--b", "8,13", "--format", "json"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(args.iter().map(|s| s.to_string()), &mut out, &mut err, false);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");
}
