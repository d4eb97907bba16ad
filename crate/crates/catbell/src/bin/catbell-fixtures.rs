//! Regenerates `fixtures/golden.json` from the oracles.

use std::process::ExitCode;

fn main() -> ExitCode {
    let path = std::env::args_os()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(catbell::fixtures::golden_path);
    let records = match catbell::fixtures::generate() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for r in &records {
        println!(
            "{:<40} oracle {:.12} main {:.12} pass {}",
            r.quantity, r.oracle_value, r.main_value, r.pass
        );
    }
    if let Err(e) = catbell::record::write_atomic(&path, &catbell::fixtures::render(&records)) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    println!("wrote {}", path.display());
    ExitCode::SUCCESS
}
