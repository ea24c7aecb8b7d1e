//! Writhe additivity and rope saved for the shipped composite fixtures.

use tightknot::analysis::{
    connect_sum_csv, connect_sum_report, writhe_additivity_report, writhe_report_csv, KnotLibrary,
};

fn main() -> Result<(), tightknot::Error> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures").into());
    let lib = KnotLibrary::load(&dir)?;
    let writhe = writhe_additivity_report(&lib)?;
    print!("{}", writhe_report_csv(&writhe));
    for row in writhe.iter().filter(|r| r.anomaly) {
        println!("anomaly: {}", row.label);
    }
    println!();
    let rope = connect_sum_report(&lib)?;
    print!("{}", connect_sum_csv(&rope));
    Ok(())
}
