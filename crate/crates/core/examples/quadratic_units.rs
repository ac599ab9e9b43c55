//! Fundamental units of `ℤ[√d]` and the gap between their image mod `s` and
//! the full unit group of `ℤ/s[√d]`.

use heckepair::families::{fundamental_unit, unit_image_gap};

fn main() -> heckepair::Result<()> {
    for d in [2i64, 3, 6, 7, 11] {
        let u = fundamental_unit(d)?;
        println!("d = {d:2}: fundamental unit {} + {}√{d}", u.m, u.n);
    }
    if let Err(e) = fundamental_unit(5) {
        println!("d =  5: {e}");
    }
    for (d, s) in [(2i64, 7u64), (2, 17), (3, 11)] {
        let gap = unit_image_gap(d, s)?;
        println!(
            "d = {d}, s = {s}: ±r0 has {} of {} units, proper {}, witness {:?}",
            gap.image_size, gap.full_size, gap.proper, gap.witness
        );
    }
    Ok(())
}
