//! Walkthrough of the complex-region arithmetic used by the SRG machinery.
//!
//! Every printed value has a closed form: the sum of two disks centered on
//! the real axis is a disk, moduli multiply, inversion maps a disk avoiding
//! the origin onto a disk, and the gap between disjoint disks is the center
//! distance minus the radii.

use nlbode_core::cgeom::{hco, minkowski_product, minkowski_sum, set_distance, Region, Resolution};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let res = Resolution::default();

    // Sector [2, 4] nonlinearity and a shifted plant disk.
    let a = Region::disk(3.0, 1.0, res);
    let b = Region::disk(-1.5, 0.5, res);
    println!("radius(A)            = {:.6}  (exact 4)", a.radius()?);
    println!("radius(B)            = {:.6}  (exact 2)", b.radius()?);

    let sum = minkowski_sum(&a, &b, res)?;
    println!("radius(A + B)        = {:.6}  (exact 3)", sum.radius()?);
    println!(
        "1.5 in A + B         = {}  (center of the sum disk)",
        sum.contains(Complex64::new(1.5, 0.0), res)
    );
    println!(
        "3.2 in A + B         = {}  (outside the sum disk)",
        sum.contains(Complex64::new(3.2, 0.0), res)
    );

    let prod = minkowski_product(&a, &b, res)?;
    println!("radius(A * B)        = {:.6}  (exact 8)", prod.radius()?);

    let inv = a.mobius_invert(res)?;
    println!("radius(inv A)        = {:.6}  (exact 0.5)", inv.radius()?);

    println!(
        "dist(A, B)           = {:.6}  (exact 3)",
        set_distance(&a, &b, res)?
    );

    // The h-convex hull of three unit-modulus points is the upper unit arc.
    let pts = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
    ];
    let arc = hco(&pts, res);
    println!("radius(hco)          = {:.6}  (exact 1)", arc.radius()?);
    println!(
        "i in hco, 0 in hco   = {}, {}  (arc passes through i, misses 0)",
        arc.contains(Complex64::new(0.0, 1.0), res),
        arc.contains(Complex64::new(0.0, 0.0), res)
    );

    Ok(())
}
