//! Counts composite knot types and reproduces the symmetry composition table.

use tightknot::composite::{
    compose_symmetry, enumerate_composites, read_prime_table, ropelength_classes, SymmetryType,
};

fn main() -> Result<(), tightknot::Error> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/primes9.txt");
    let table = read_prime_table(path)?;
    let labels = enumerate_composites(&table, 12)?;
    let classes = ropelength_classes(&labels);
    println!("{} composite types, {} ropelength classes", labels.len(), classes.len());
    for l in labels.iter().take(8) {
        println!("  {l}");
    }

    println!("\ntypes/classes for K1 # K2 (unrelated summands, then related)");
    for (i, &a) in SymmetryType::ALL.iter().enumerate() {
        for &b in &SymmetryType::ALL[i..] {
            let (t, c) = compose_symmetry(a, b, false);
            let same = if a == b {
                let (t, c) = compose_symmetry(a, b, true);
                format!("{t}/{c}")
            } else {
                "-".into()
            };
            println!("  {:<10} {:<10} {t}/{c}   {same}", a.tag(), b.tag());
        }
    }
    Ok(())
}
