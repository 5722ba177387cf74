//! Convex bodies: projections, diameters and the boundary corner.

use mixlab::{ConvexBody, Result};

pub fn main() -> Result<()> {
    let bodies = [
        ("interval", ConvexBody::interval(-0.5, 0.5)?),
        ("box", ConvexBody::boxed(vec![0.0, -1.0], vec![2.0, 1.0])?),
        ("ball", ConvexBody::ball(vec![1.0, 1.0], 0.5)?),
        ("whole space", ConvexBody::whole_space(2)?),
    ];
    for (name, body) in &bodies {
        let x = vec![3.0; body.dim()];
        let p = body.project(&x)?;
        println!("{name:>12}: diameter {:?}, project({x:?}) = {p:?}", body.diameter());
        // projecting twice changes nothing
        assert_eq!(body.project(&p)?, p);
        if body.diameter().is_finite() {
            println!("{:>12}  corner {:?}", "", body.corner()?);
        }
    }
    Ok(())
}
