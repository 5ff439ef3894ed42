//! Sphero-conal coordinates of a few points on the unit sphere.

use asymtop::harmonics::{
    cartesian_from_spheroconal, coordinate_orthogonality, spheroconal_from_cartesian,
};
use asymtop::TopParameters;

fn main() -> asymtop::Result<()> {
    let p = TopParameters::new(1.0, 2.0, 3.0)?;
    let s = 1.0 / 3f64.sqrt();
    let points = [[s, s, s], [0.6, 0.0, 0.8], [0.2, -0.4, 0.894_427_190_999_915_9]];
    for [x, y, z] in points {
        match spheroconal_from_cartesian(x, y, z, &p) {
            Ok(sc) => {
                let sq = cartesian_from_spheroconal(sc, &p)?;
                let cos = coordinate_orthogonality(sc, &p, 1e-6)?;
                println!(
                    "({x:.4}, {y:.4}, {z:.4}) -> u = ({:.6}, {:.6}); squares back {sq:.6?}; cos angle {cos:.1e}",
                    sc.u1, sc.u2
                );
            }
            Err(e) => println!("({x:.4}, {y:.4}, {z:.4}) -> {e}"),
        }
    }
    Ok(())
}
