//! Sends a random word of `L_0(D_N)` through the composite scheme with more
//! errors per factor than the monolithic code can correct.

use std::error::Error;

use ellcode_core::ecp::channel_corrupt;
use ellcode_core::pipeline::{Instance, InstanceConfig};
use ellcode_core::seed::rng_for;

fn main() -> Result<(), Box<dyn Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "configs/flagship.json".into());
    let cfg = InstanceConfig::from_json(&std::fs::read_to_string(path)?)?;
    let inst = Instance::build(&cfg)?;
    let scheme = inst.scheme.as_ref().ok_or("N needs at least two prime factors")?;

    let mut rng = rng_for(7, "demo");
    let level = inst.level;
    let weight = scheme.capacity();
    let f: Vec<_> = (0..scheme.word_dim()).map(|_| level.random(&mut rng)).collect();
    let received = scheme
        .encode(&f)?
        .into_iter()
        .map(|(r, c)| Ok((r, channel_corrupt(&c, weight, &mut rng)?)))
        .collect::<Result<Vec<_>, ellcode_core::Error>>()?;
    let out = scheme.decode(&received)?;
    println!(
        "{} errors per factor (monolithic capacity {}): {}",
        weight,
        inst.main_code().dstar,
        if out.word.as_ref() == Some(&f) { "recovered" } else { "failed" }
    );
    Ok(())
}
