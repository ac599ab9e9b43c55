//! The Heisenberg family: conjugates of `M` and `R`-orbits on `(ℤ/s)²`.

use heckepair::families::{heis_conj_lattice, heis_orbit, heis_orbit_size};

fn main() -> heckepair::Result<()> {
    for n in [1u64, 2, 6, 12] {
        let c = heis_conj_lattice(n)?;
        println!("n = {n:2}: M ∩ xMx⁻¹ = {{0}} x {}Z  (lattice {})", c.generator, c.lattice);
    }
    let s = 12;
    for z in [0u64, 1, 4, 6] {
        let orbit = heis_orbit(z, 1, s)?;
        println!("orbit of ({z}, 1) mod {s}: {} points (s/gcd = {})", orbit.len(), heis_orbit_size(z, s));
    }
    Ok(())
}
