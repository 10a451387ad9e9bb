//! Plain-text tables.

use std::fmt::Write;

use bnchain_core::effective::{EffectiveSeries, L1Description};
use bnchain_core::elliptic::{EHSeries, EllipticBundleClass};
use bnchain_core::tropical::{TropVanishingTable, TropicalDivisor};
use bnchain_core::{Tableau, VanishingSequence};

fn orders_line(orders: &[i64]) -> String {
    orders.iter().map(|o| format!("{o:>3}")).collect::<String>()
}

/// One row per index, then the free indices.
pub fn tableau(t: &Tableau) -> String {
    let mut out = String::new();
    for row in t.rows() {
        let cells: Vec<String> = row.iter().map(|e| format!("{e:>3}")).collect();
        writeln!(out, "{}", cells.join("")).unwrap();
    }
    writeln!(out, "free: {:?}", t.free_indices()).unwrap();
    out
}

fn component_block(out: &mut String, label: &str, i: usize, bundle: &EllipticBundleClass, vp: &VanishingSequence, vq: &VanishingSequence) {
    let bundle = bundle.to_string();
    writeln!(out, "{label:<12}{bundle:<18}P_{i}:{}", orders_line(&vp.increasing())).unwrap();
    writeln!(out, "{:<30}Q_{i}:{}", "", orders_line(vq.orders())).unwrap();
}

/// Each component with its bundle, the orders at `P_i` in increasing order
/// and the orders at `Q_i` in decreasing order, so that each column is one
/// section.
pub fn eh_series(s: &EHSeries) -> String {
    let p = s.params();
    let mut out = format!("g={} d={} r={}\n", p.g, p.d, p.r);
    for (idx, c) in s.components().iter().enumerate() {
        component_block(&mut out, &format!("C_{}", idx + 1), idx + 1, &c.bundle, &c.vanish_p, &c.vanish_q);
    }
    out
}

pub fn effective_series(s: &EffectiveSeries) -> String {
    let p = s.params();
    let mut out = format!("g={} d={} r={}\n", p.g, p.d, p.r);
    for (idx, c) in s.components().iter().enumerate() {
        let label = format!("C_{} d={}", idx + 1, c.degree());
        component_block(&mut out, &label, idx + 1, &c.bundle, &c.w_p, &c.w_q);
    }
    let a: Vec<String> = s.node_twists().iter().map(|a| a.to_string()).collect();
    writeln!(out, "a = ({})", a.join(",")).unwrap();
    out
}

/// The concentrated bundle and its restrictions to every component.
pub fn l1(desc: &L1Description) -> String {
    let mut out = String::new();
    writeln!(out, "L_1 (total degree {}):", desc.total_degree()).unwrap();
    writeln!(out, "  C_1: {}", desc.concentration_bundle).unwrap();
    for (idx, r) in desc.restrictions.iter().enumerate() {
        writeln!(out, "  C_{}: {}", idx + 2, r.bundle(idx + 2)).unwrap();
    }
    out
}

/// Restrictions of each `L_j` to each `C_i`, one row per `j`.
pub fn grid(grid: &[Vec<EllipticBundleClass>]) -> String {
    let mut out = String::from("restrictions L_j|C_i (row j, column i):\n");
    let width = grid.iter().flatten().map(|b| b.to_string().len()).max().unwrap_or(1) + 2;
    for (j, row) in grid.iter().enumerate() {
        let cells: String = row.iter().map(|b| format!("{:<width$}", b.to_string())).collect();
        writeln!(out, "  L_{:<3}{}", j + 1, cells.trim_end()).unwrap();
    }
    out
}

/// One point per line with its multiplicity.
pub fn divisor(d: &TropicalDivisor) -> String {
    let mut out = format!("degree {}\n", d.degree());
    for (p, mult) in d.iter() {
        writeln!(out, "  {mult:>3} × {p}").unwrap();
    }
    out
}

/// Orders at each node, and on each loop the point `x_k` with the case that
/// carries the orders across it.
pub fn trop_table(table: &TropVanishingTable) -> String {
    let mut out = String::new();
    for (i, u) in table.u.iter().enumerate() {
        writeln!(out, "Q_{i:<3}{}", orders_line(u.orders())).unwrap();
        if let Some(case) = table.cases.get(i) {
            let x = match table.reduced.x(i + 1) {
                Some(p) => p.to_string(),
                None => "-".to_string(),
            };
            writeln!(out, "   loop {:<3} x = {x:<12} case {case}", i + 1).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bnchain_core::elliptic::eh_series_from_tableau;
    use bnchain_core::BNParams;

    #[test]
    fn component_rows_line_up_sections() {
        let t = Tableau::from_rows(BNParams::new(6, 6, 2).unwrap(), &[vec![1, 2, 4], vec![3, 5, 6]]).unwrap();
        let text = eh_series(&eh_series_from_tableau(&t).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].starts_with("C_1         O(6Q_1)"));
        assert!(lines[1].ends_with("P_1:  0  1  2"));
        assert!(lines[2].ends_with("Q_1:  6  4  3"));
    }
}
