//! Bundled reference circuits.
//!
//! These small netlists have hand-verified cohomology and drive both the
//! built-in check suite (`netsheaf paper-suite`) and the test corpus. Each
//! constant is the exact text of the file under `circuits/`.

/// Single 2-input AND gate, all edges external.
pub const AND1: &str = include_str!("../circuits/and1.net");

/// Shared-input glitch circuit: fork, inverter, and AND, with the two paths
/// racing into the AND gate.
pub const GLITCH: &str = include_str!("../circuits/glitch.net");

/// R-S flip-flop as a single 3-input gate with a feedback wire.
pub const RSFF: &str = include_str!("../circuits/rsff.net");

/// 3-input gate with one input extended through a buffer (a 2-gate tree).
pub const MINPUT3: &str = include_str!("../circuits/minput.net");

/// Two 2-input gates composed in series (a 2-gate tree with side inputs).
pub const COMPOSE22: &str = include_str!("../circuits/compose.net");

/// Ring oscillator: one inverter feeding itself.
pub const RINGOSC: &str = include_str!("../circuits/ringosc.net");

/// All bundled circuits with their short names.
pub fn bundled() -> Vec<(&'static str, &'static str)> {
    vec![
        ("and1", AND1),
        ("glitch", GLITCH),
        ("rsff", RSFF),
        ("minput", MINPUT3),
        ("compose", COMPOSE22),
        ("ringosc", RINGOSC),
    ]
}

/// Text of the buffered m-input circuit for any m >= 1: one m-input gate
/// whose pin 0 is fed through a buffer, every other pin external. The gate
/// computes AND of its inputs; the cohomology is the same for any table.
pub fn m_input_text(m: usize) -> String {
    assert!(m >= 1);
    let rows: Vec<&str> = (0..1usize << m).map(|k| if k == (1 << m) - 1 { "1" } else { "0" }).collect();
    let mut text = format!("gate g TABLE in={m} out=1 rows={}\n", rows.join(" "));
    text.push_str("gate buf BUF\n");
    text.push_str("input a -> buf.0\n");
    text.push_str("wire e1 buf.0 -> g.0\n");
    for pin in 1..m {
        text.push_str(&format!("input e{} -> g.{pin}\n", pin + 1));
    }
    text.push_str("output g.0 -> y\n");
    text
}

/// Text of the two-gate composition: an n-input gate `v` feeding pin 0 of an
/// m-input gate `w`. `v_bits`/`w_bits` give the single-output truth tables as
/// row-indexed bit masks (bit k of the mask = output for input tuple k).
pub fn composition_text(n: usize, m: usize, v_bits: u64, w_bits: u64) -> String {
    assert!(n >= 1 && m >= 1);
    let row_str = |bits: u64, inputs: usize| -> String {
        (0..1usize << inputs)
            .map(|k| if (bits >> k) & 1 == 1 { "1" } else { "0" })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut text = format!("gate w TABLE in={m} out=1 rows={}\n", row_str(w_bits, m));
    text.push_str(&format!("gate v TABLE in={n} out=1 rows={}\n", row_str(v_bits, n)));
    for pin in 0..n {
        text.push_str(&format!("input d{} -> v.{pin}\n", pin + 1));
    }
    text.push_str("wire e1 v.0 -> w.0\n");
    for pin in 1..m {
        text.push_str(&format!("input e{} -> w.{pin}\n", pin + 1));
    }
    text.push_str("output w.0 -> y\n");
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::Netlist;

    #[test]
    fn all_bundled_circuits_parse_cleanly() {
        for (name, text) in bundled() {
            let nl = Netlist::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(nl.validate().is_empty(), "{name} has diagnostics");
        }
    }

    #[test]
    fn generated_circuits_match_their_bundled_instances() {
        assert_eq!(
            Netlist::parse(&m_input_text(3)).unwrap(),
            Netlist::parse(MINPUT3).unwrap()
        );
        // OR(2) into AND(2) is the bundled composition
        assert_eq!(
            Netlist::parse(&composition_text(2, 2, 0b1110, 0b1000)).unwrap(),
            Netlist::parse(COMPOSE22).unwrap()
        );
    }
}
