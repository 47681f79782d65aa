//! Plain (P1) portable bitmap export of space-time diagrams.

use std::io::{self, Write};

use crate::ca::SpaceTimeDiagram;

/// Writes `diagram` as a P1 bitmap: one image line per time step, `1` for a
/// TRUE (black) cell. The output contains only ASCII digits, spaces and
/// newlines, so it is byte-stable across platforms.
pub fn write_pbm<W: Write>(diagram: &SpaceTimeDiagram, mut out: W) -> io::Result<()> {
    writeln!(out, "P1")?;
    writeln!(out, "{} {}", diagram.width(), diagram.height())?;
    let mut line = Vec::with_capacity(diagram.width() + 1);
    for row in diagram.rows() {
        line.clear();
        line.extend(row.bits().map(|b| if b { b'1' } else { b'0' }));
        line.push(b'\n');
        out.write_all(&line)?;
    }
    Ok(())
}

pub fn to_pbm_string(diagram: &SpaceTimeDiagram) -> String {
    let mut buf = Vec::new();
    write_pbm(diagram, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("PBM output is ASCII")
}
