use std::collections::BTreeMap;
use std::io::Write;

fn main() {
    let env: BTreeMap<String, String> = std::env::vars().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = se2sr_cli::run(std::env::args_os(), &env, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
