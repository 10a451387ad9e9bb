use super::{is_equivalent_to_effective, ChainGeometry, ChainPoint, TropicalDivisor};
use crate::error::Result;

/// Whether `D - E` is equivalent to an effective divisor for every effective
/// `E` of degree `r` supported on the nodes `Q_0, …, Q_g`. The nodes are the
/// vertices of a loopless model of the chain, so they determine the rank.
pub fn rank_at_least(geom: &ChainGeometry, d: &TropicalDivisor, r: i64) -> Result<bool> {
    if r < 0 {
        return Ok(true);
    }
    let mut test = d.clone();
    all_compositions(geom, &mut test, 0, r)
}

// Distributes `remaining` chips over nodes `node..=g`, subtracting them from
// `test`, and checks every completed composition.
fn all_compositions(geom: &ChainGeometry, test: &mut TropicalDivisor, node: usize, remaining: i64) -> Result<bool> {
    let q = ChainPoint::Node(node);
    if node == geom.g() {
        test.add(q, -remaining);
        let ok = is_equivalent_to_effective(geom, test)?;
        test.add(q, remaining);
        return Ok(ok);
    }
    for here in 0..=remaining {
        test.add(q, -here);
        let ok = all_compositions(geom, test, node + 1, remaining - here)?;
        test.add(q, here);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `-1` when `D` is not equivalent to an effective divisor, otherwise the
/// largest `r` with [`rank_at_least`].
pub fn tropical_rank(geom: &ChainGeometry, d: &TropicalDivisor) -> Result<i64> {
    if !is_equivalent_to_effective(geom, d)? {
        return Ok(-1);
    }
    let mut r = 0;
    while r < d.degree() && rank_at_least(geom, d, r + 1)? {
        r += 1;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn single_loop_ranks() {
        let geom = ChainGeometry::from_integers(&[(3, 2)]).unwrap();
        let q0 = TropicalDivisor::from_points([(ChainPoint::Node(0), 1)]);
        assert!(rank_at_least(&geom, &q0, 0).unwrap());
        assert!(!rank_at_least(&geom, &q0, 1).unwrap());
        assert_eq!(tropical_rank(&geom, &q0).unwrap(), 0);
        let x = ChainPoint::Interior { loop_index: 1, coord: Rational::new(7, 3) };
        assert_eq!(tropical_rank(&geom, &TropicalDivisor::from_points([(x, 2)])).unwrap(), 1);
        assert_eq!(tropical_rank(&geom, &TropicalDivisor::from_points([(x, 1), (ChainPoint::Node(0), -1)])).unwrap(), -1);
        assert_eq!(tropical_rank(&geom, &TropicalDivisor::new()).unwrap(), 0);
    }

    #[test]
    fn canonical_degree_on_two_loops() {
        // the canonical class 2Q_1 has rank g-1; 2Q_0 is not canonical when l_1 != m_1
        let geom = ChainGeometry::from_integers(&[(5, 2), (4, 3)]).unwrap();
        let d = TropicalDivisor::from_points([(ChainPoint::Node(1), 2)]);
        assert_eq!(tropical_rank(&geom, &d).unwrap(), 1);
        let e = TropicalDivisor::from_points([(ChainPoint::Node(0), 2)]);
        assert_eq!(tropical_rank(&geom, &e).unwrap(), 0);
    }
}
