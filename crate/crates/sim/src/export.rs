use std::io::Write;

use prs4d_core::constellation::Constellation4D;

use crate::report::format_sig;

pub const CONSTELLATION_HEADER: &str = "index,label_bits,s1,s2,s3,s4";

/// One row per point: index, label bits with `b1` first, coordinates with
/// 17 significant digits.
pub fn write_constellation<W: Write>(out: &mut W, c: &Constellation4D) -> std::io::Result<()> {
    writeln!(out, "{CONSTELLATION_HEADER}")?;
    let m = c.bits_per_symbol();
    for (i, p) in c.points().iter().enumerate() {
        let bits: String = (0..m).map(|k| if c.bit(i, k) == 1 { '1' } else { '0' }).collect();
        let coords: Vec<String> = p.iter().map(|v| format_sig(*v, 17)).collect();
        writeln!(out, "{i},{bits},{}", coords.join(","))?;
    }
    Ok(())
}
