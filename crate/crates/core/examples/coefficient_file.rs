// Round trip of a coefficient table through an `SCV1` file.

use scv::form::FormSpec;
use scv::qalg::{cache, eta_power, AnySeries};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("scv-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("eta8_3.scv");

    let series = eta_power(8, 3, 200)?;
    cache::save(&path, &AnySeries::Exact(series.clone()))?;
    let back = cache::load(&path)?;
    println!("{} bytes, mode {}, known to q^{}", std::fs::metadata(&path)?.len(), back.mode(), back.nmax());
    match &back {
        AnySeries::Exact(s) if *s == series => {}
        _ => return Err("SCV1 round trip changed the series".into()),
    }

    // the same file serves as a form for the convolution engine
    let spec: FormSpec = format!("file:{}:4:9", path.display()).parse()?;
    let table = spec.table(150)?;
    println!("{spec}: a(1..8) = {:?}", &table.coeffs()[1..=8]);

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
