//! Node positions and the intersection-relative geometry.
//!
//! The intersection of the X road (horizontal axis) and the Y road
//! (vertical axis) sits at the origin. Receivers are described either in
//! Cartesian form ([`Position`]) or by their distance and angle to the
//! intersection ([`NodePolar`]).

use std::f64::consts::TAU;

/// One of the two perpendicular roads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Road {
    X,
    Y,
}

impl Road {
    pub const ALL: [Road; 2] = [Road::X, Road::Y];
}

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Translate by `dx` along the X road.
    pub fn shifted_x(&self, dx: f64) -> Self {
        Self::new(self.x + dx, self.y)
    }
}

/// Receiver geometry relative to the intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePolar {
    /// Distance to the intersection, meters.
    pub m: f64,
    /// Angle between the node and the X road, radians in `[0, 2π)`.
    pub theta: f64,
}

impl NodePolar {
    pub const AT_ORIGIN: NodePolar = NodePolar { m: 0.0, theta: 0.0 };

    pub fn new(m: f64, theta: f64) -> Self {
        Self { m, theta }
    }

    pub fn to_position(&self) -> Position {
        Position::new(self.m * self.theta.cos(), self.m * self.theta.sin())
    }

    /// Perpendicular distance from the node to `road`.
    pub fn offset_from(&self, road: Road) -> f64 {
        match road {
            Road::X => (self.m * self.theta.sin()).abs(),
            Road::Y => (self.m * self.theta.cos()).abs(),
        }
    }

    /// Coordinate of the node's orthogonal projection onto `road`.
    pub fn projection_on(&self, road: Road) -> f64 {
        match road {
            Road::X => self.m * self.theta.cos(),
            Road::Y => self.m * self.theta.sin(),
        }
    }
}

pub fn to_polar(p: Position) -> NodePolar {
    let m = p.x.hypot(p.y);
    if m == 0.0 {
        return NodePolar::AT_ORIGIN;
    }
    let mut theta = p.y.atan2(p.x);
    if theta < 0.0 {
        theta += TAU;
    }
    // atan2 of a tiny negative y can round up to exactly 2π
    if theta >= TAU {
        theta = 0.0;
    }
    NodePolar { m, theta }
}

pub fn distance(a: Position, b: Position) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Distance from receiver `n` to the road point at coordinate `t`.
pub fn dist_to_road_point(n: NodePolar, t: f64, road: Road) -> f64 {
    n.offset_from(road).hypot(t - n.projection_on(road))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn polar_examples() {
        assert_eq!(to_polar(Position::ORIGIN), NodePolar::new(0.0, 0.0));

        let p = to_polar(Position::new(100.0, 10.0));
        assert!((p.m - 100.498_756_211_208_9).abs() < 1e-9);
        assert!((p.theta - 0.099_668_652_491_162).abs() < 1e-12);

        let p = to_polar(Position::new(0.0, 5.0));
        assert_eq!(p.m, 5.0);
        assert!((p.theta - FRAC_PI_2).abs() < 1e-15);

        let p = to_polar(Position::new(100.0, -10.0));
        assert!(p.theta > 3.0 * FRAC_PI_2 && p.theta < TAU);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Position::ORIGIN, Position::new(50.0, 0.0)), 50.0);
        let a = Position::new(3.5, -2.0);
        assert_eq!(distance(a, a), 0.0);
        assert_eq!(distance(Position::ORIGIN, Position::new(3.0, 4.0)), 5.0);
    }

    #[test]
    fn road_point_distance_examples() {
        assert_eq!(dist_to_road_point(NodePolar::AT_ORIGIN, 7.0, Road::X), 7.0);
        let on_y = NodePolar::new(10.0, FRAC_PI_2);
        assert!((dist_to_road_point(on_y, 0.0, Road::X) - 10.0).abs() < 1e-12);
        assert!(dist_to_road_point(on_y, 10.0, Road::Y).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn polar_round_trip(x in -1e3f64..1e3, y in -1e3f64..1e3) {
            let p = Position::new(x, y);
            let n = to_polar(p);
            prop_assert!((0.0..TAU).contains(&n.theta));
            prop_assert!((n.m - x.hypot(y)).abs() <= 1e-12 * n.m.max(1.0));
            let q = n.to_position();
            prop_assert!((q.x - x).abs() <= 1e-12 && (q.y - y).abs() <= 1e-12);
        }

        #[test]
        fn perpendicular_is_minimum(m in 0.0f64..500.0, theta in 0.0f64..TAU, t in -1e3f64..1e3) {
            let n = NodePolar::new(m, theta);
            prop_assert!(dist_to_road_point(n, t, Road::X) >= m * theta.sin().abs() - 1e-9);
            prop_assert!(dist_to_road_point(n, t, Road::Y) >= m * theta.cos().abs() - 1e-9);
        }

        #[test]
        fn triangle_inequality(
            a in (-1e3f64..1e3, -1e3f64..1e3),
            b in (-1e3f64..1e3, -1e3f64..1e3),
            c in (-1e3f64..1e3, -1e3f64..1e3),
        ) {
            let (a, b, c) = (Position::new(a.0, a.1), Position::new(b.0, b.1), Position::new(c.0, c.1));
            prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
            prop_assert_eq!(distance(a, b), distance(b, a));
        }
    }
}
