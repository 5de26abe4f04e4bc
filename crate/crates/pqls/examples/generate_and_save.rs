//! Generate a random dense Ising instance, write it to disk in the text
//! format, read it back, and confirm the round trip.
//!
//! Run with: cargo run --example generate_and_save

use pqls::io::{read_instance, write_instance};
use pqls::ising::generate_instance;

fn main() -> pqls::Result<()> {
    let problem = generate_instance(12, 2024)?;
    let text = write_instance(&problem);

    let path = std::env::temp_dir().join("pqls_example_instance.txt");
    std::fs::write(&path, &text)?;
    println!("wrote {} variables to {}", problem.n(), path.display());
    println!("first lines:\n{}", text.lines().take(5).collect::<Vec<_>>().join("\n"));

    let reloaded = read_instance(&std::fs::read_to_string(&path)?)?;
    assert_eq!(reloaded, problem);
    println!("round trip ok: {} couplings", reloaded.couplings().len());
    Ok(())
}
