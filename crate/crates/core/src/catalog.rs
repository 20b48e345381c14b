//! Named configurations used in examples, tests and the command line tool.

use crate::configuration::{Configuration, PointRecord};
use crate::pencil::attach_chains;

/// Base points of the pencil spanned by the cuspidal cubic `y^2 z = x^3`
/// and three times the line at infinity: the first two points lie on the
/// line, the third is a satellite point.
pub fn cusp_base_points() -> Vec<PointRecord> {
    let prox: [&[usize]; 6] = [&[], &[1], &[1, 2], &[3], &[4], &[5]];
    prox.iter()
        .enumerate()
        .map(|(i, p)| PointRecord::new(format!("p0_{}", i + 1), i + 1, p, i < 2))
        .collect()
}

pub fn cusp_base() -> Configuration {
    Configuration::new(cusp_base_points(), &[6]).expect("cusp base is a valid configuration")
}

/// The cusp base followed by free chains of lengths 2 and 1.
pub fn cusp() -> Configuration {
    attach_chains(&cusp_base(), &[2, 1]).expect("cusp chains are valid")
}

/// `n` free points, each on the exceptional divisor of the previous one, the
/// first `i_l` of them on the line at infinity.
pub fn free_chain(n: usize, i_l: usize) -> Configuration {
    let points = (1..=n)
        .map(|u| {
            let prox: Vec<usize> = if u == 1 { vec![] } else { vec![u - 1] };
            PointRecord::new(format!("p0_{u}"), u, &prox, u <= i_l)
        })
        .collect();
    Configuration::new(points, &[n]).expect("free chains are valid")
}

/// One point on the line at infinity. This is the base of the pencil of
/// lines through that point, which fails the strict inequalities required
/// of pencil bases (its first one holds with equality).
pub fn line() -> Configuration {
    free_chain(1, 1)
}

/// A smooth conic tangent to the line at infinity.
pub fn conic() -> Configuration {
    free_chain(4, 2)
}

/// A smooth cubic with an inflection point at infinity (genus one, so not of
/// the rational type).
pub fn flex_cubic() -> Configuration {
    free_chain(9, 3)
}
