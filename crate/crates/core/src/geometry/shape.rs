use std::fmt;
use std::sync::Arc;

use crate::error::GeometryError;
use crate::scalar::{lit, norm, sub, Scalar, Vec3};

pub type ImplicitFn<T> = Arc<dyn Fn(&Vec3<T>) -> T + Send + Sync>;

/// Implicit interface description; the interface is the zero set.
#[derive(Clone)]
pub enum Implicit<T> {
    /// Σ aᵢ (xᵢ − cᵢ)² − level
    Quadric {
        coeffs: Vec3<T>,
        center: Vec3<T>,
        level: T,
    },
    /// |x − c| − radius
    Ball {
        center: Vec3<T>,
        radius: T,
    },
    /// n·x − offset
    HalfSpace {
        normal: Vec3<T>,
        offset: T,
    },
    /// √(x²+y²) − radius
    ZCylinder {
        radius: T,
    },
    /// (R − √(x²+y²))² + z² − r²
    Torus {
        major: T,
        minor: T,
    },
    /// ρ² − cρ + cz
    Apple {
        c: T,
    },
    /// Signed slant distance to the cone r = slope·(z − apex_z), opening upward.
    Cone {
        apex_z: T,
        slope: T,
    },
    /// r − (base + amplitude·sin(petals·θ))
    Flower {
        base: T,
        amplitude: T,
        petals: T,
    },
    /// Five-pointed star cross-section: signed distance to the edge lines of
    /// the nearest tip sector.
    Star {
        tip_radius: T,
        tip_angle: T,
        rotation: T,
    },
    Max(Vec<Implicit<T>>),
    Min(Vec<Implicit<T>>),
    /// −inner, swapping the two sides.
    Negated(Box<Implicit<T>>),
    /// User-provided function with a central-difference gradient.
    Custom {
        f: ImplicitFn<T>,
        step: T,
    },
}

impl<T: Scalar> fmt::Debug for Implicit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Implicit::Quadric { coeffs, center, level } => f
                .debug_struct("Quadric")
                .field("coeffs", coeffs)
                .field("center", center)
                .field("level", level)
                .finish(),
            Implicit::Ball { center, radius } => f
                .debug_struct("Ball")
                .field("center", center)
                .field("radius", radius)
                .finish(),
            Implicit::HalfSpace { normal, offset } => f
                .debug_struct("HalfSpace")
                .field("normal", normal)
                .field("offset", offset)
                .finish(),
            Implicit::ZCylinder { radius } => f.debug_struct("ZCylinder").field("radius", radius).finish(),
            Implicit::Torus { major, minor } => f
                .debug_struct("Torus")
                .field("major", major)
                .field("minor", minor)
                .finish(),
            Implicit::Apple { c } => f.debug_struct("Apple").field("c", c).finish(),
            Implicit::Cone { apex_z, slope } => f
                .debug_struct("Cone")
                .field("apex_z", apex_z)
                .field("slope", slope)
                .finish(),
            Implicit::Flower {
                base,
                amplitude,
                petals,
            } => f
                .debug_struct("Flower")
                .field("base", base)
                .field("amplitude", amplitude)
                .field("petals", petals)
                .finish(),
            Implicit::Star {
                tip_radius,
                tip_angle,
                rotation,
            } => f
                .debug_struct("Star")
                .field("tip_radius", tip_radius)
                .field("tip_angle", tip_angle)
                .field("rotation", rotation)
                .finish(),
            Implicit::Max(p) => f.debug_tuple("Max").field(p).finish(),
            Implicit::Min(p) => f.debug_tuple("Min").field(p).finish(),
            Implicit::Negated(p) => f.debug_tuple("Negated").field(p).finish(),
            Implicit::Custom { step, .. } => f.debug_struct("Custom").field("step", step).finish(),
        }
    }
}

fn radial<T: Scalar>(p: &Vec3<T>) -> T {
    (p[0] * p[0] + p[1] * p[1]).sqrt()
}

/// Sector decomposition shared by value and gradient of the star.
struct StarLocal<T> {
    x_rot: T,
    y_rot: T,
    frame_angle: T,
}

fn star_local<T: Scalar>(p: &Vec3<T>, rotation: T) -> StarLocal<T> {
    let sector = T::PI() * lit(0.4);
    let theta = p[1].atan2(p[0]);
    let rel = theta - rotation;
    let k = (rel / sector).round();
    let frame_angle = rotation + k * sector;
    let (s, c) = frame_angle.sin_cos();
    StarLocal {
        x_rot: c * p[0] + s * p[1],
        y_rot: -s * p[0] + c * p[1],
        frame_angle,
    }
}

impl<T: Scalar> Implicit<T> {
    pub fn custom(f: ImplicitFn<T>, grid_spacing: T) -> Self {
        Implicit::Custom {
            f,
            step: grid_spacing * lit(1e-6),
        }
    }

    pub fn value(&self, p: &Vec3<T>) -> T {
        match self {
            Implicit::Quadric { coeffs, center, level } => {
                let mut s = T::zero();
                for d in 0..3 {
                    let t = p[d] - center[d];
                    s = s + coeffs[d] * t * t;
                }
                s - *level
            }
            Implicit::Ball { center, radius } => norm(&sub(p, center)) - *radius,
            Implicit::HalfSpace { normal, offset } => normal[0] * p[0] + normal[1] * p[1] + normal[2] * p[2] - *offset,
            Implicit::ZCylinder { radius } => radial(p) - *radius,
            Implicit::Torus { major, minor } => {
                let t = *major - radial(p);
                t * t + p[2] * p[2] - *minor * *minor
            }
            Implicit::Apple { c } => {
                let rho = norm(p);
                rho * rho - *c * rho + *c * p[2]
            }
            Implicit::Cone { apex_z, slope } => {
                (radial(p) - *slope * (p[2] - *apex_z)) / (T::one() + *slope * *slope).sqrt()
            }
            Implicit::Flower {
                base,
                amplitude,
                petals,
            } => {
                let theta = p[1].atan2(p[0]);
                radial(p) - (*base + *amplitude * (*petals * theta).sin())
            }
            Implicit::Star {
                tip_radius,
                tip_angle,
                rotation,
            } => {
                let l = star_local(p, *rotation);
                let (s, c) = (*tip_angle * lit(0.5)).sin_cos();
                l.x_rot * s + l.y_rot.abs() * c - *tip_radius * s
            }
            Implicit::Max(parts) => parts
                .iter()
                .map(|q| q.value(p))
                .fold(T::neg_infinity(), |a, b| a.max(b)),
            Implicit::Min(parts) => parts.iter().map(|q| q.value(p)).fold(T::infinity(), |a, b| a.min(b)),
            Implicit::Custom { f, .. } => f(p),
            Implicit::Negated(inner) => -inner.value(p),
        }
    }

    /// Index of the piece that determines a max/min composition at `p`;
    /// the first piece wins ties.
    fn active_piece<'a>(parts: &'a [Implicit<T>], p: &Vec3<T>, take_max: bool) -> &'a Implicit<T> {
        let mut best = 0;
        let mut best_val = parts[0].value(p);
        for (i, q) in parts.iter().enumerate().skip(1) {
            let v = q.value(p);
            let better = if take_max { v > best_val } else { v < best_val };
            if better {
                best = i;
                best_val = v;
            }
        }
        &parts[best]
    }

    pub fn gradient(&self, p: &Vec3<T>) -> Vec3<T> {
        let o = T::zero();
        let two = lit::<T>(2.0);
        match self {
            Implicit::Quadric { coeffs, center, .. } => std::array::from_fn(|d| two * coeffs[d] * (p[d] - center[d])),
            Implicit::Ball { center, .. } => {
                let r = sub(p, center);
                let n = norm(&r);
                if n == o {
                    [o, o, o]
                } else {
                    [r[0] / n, r[1] / n, r[2] / n]
                }
            }
            Implicit::HalfSpace { normal, .. } => *normal,
            Implicit::ZCylinder { .. } => {
                let r = radial(p);
                if r == o {
                    [o, o, o]
                } else {
                    [p[0] / r, p[1] / r, o]
                }
            }
            Implicit::Torus { major, .. } => {
                let r = radial(p);
                if r == o {
                    return [o, o, two * p[2]];
                }
                let f = -two * (*major - r) / r;
                [f * p[0], f * p[1], two * p[2]]
            }
            Implicit::Apple { c } => {
                let rho = norm(p);
                if rho == o {
                    return [o, o, *c];
                }
                let f = two - *c / rho;
                [f * p[0], f * p[1], f * p[2] + *c]
            }
            Implicit::Cone { slope, .. } => {
                let r = radial(p);
                let scale = (T::one() + *slope * *slope).sqrt();
                if r == o {
                    return [o, o, -*slope / scale];
                }
                [p[0] / (r * scale), p[1] / (r * scale), -*slope / scale]
            }
            Implicit::Flower { amplitude, petals, .. } => {
                let r2 = p[0] * p[0] + p[1] * p[1];
                if r2 == o {
                    return [o, o, o];
                }
                let r = r2.sqrt();
                let theta = p[1].atan2(p[0]);
                let dtheta = *amplitude * *petals * (*petals * theta).cos();
                [p[0] / r + dtheta * p[1] / r2, p[1] / r - dtheta * p[0] / r2, o]
            }
            Implicit::Star {
                tip_angle, rotation, ..
            } => {
                let l = star_local(p, *rotation);
                let (s, c) = (*tip_angle * lit(0.5)).sin_cos();
                let gy = if l.y_rot < o { -c } else { c };
                let (fs, fc) = l.frame_angle.sin_cos();
                [fc * s - fs * gy, fs * s + fc * gy, o]
            }
            Implicit::Max(parts) => Self::active_piece(parts, p, true).gradient(p),
            Implicit::Min(parts) => Self::active_piece(parts, p, false).gradient(p),
            Implicit::Negated(inner) => inner.gradient(p).map(|g| -g),
            Implicit::Custom { f, step } => std::array::from_fn(|d| {
                let mut a = *p;
                let mut b = *p;
                a[d] = a[d] + *step;
                b[d] = b[d] - *step;
                (f(&a) - f(&b)) / (two * *step)
            }),
        }
    }
}

/// Outward unit normal and its azimuth/zenith angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalInfo<T> {
    pub normal: Vec3<T>,
    pub theta: T,
    pub phi_angle: T,
}

pub const DEGENERATE_GRADIENT: f64 = 1e-8;

/// Angles (θ, φ) with n = (sinφ cosθ, sinφ sinθ, cosφ) from a gradient vector.
pub fn angles_from_gradient<T: Scalar>(g: &Vec3<T>, at: &Vec3<T>) -> Result<NormalInfo<T>, GeometryError> {
    let mag = norm(g);
    if !(mag >= lit(DEGENERATE_GRADIENT)) {
        return Err(GeometryError::DegenerateNormal {
            x: at[0].to_f64().unwrap_or(f64::NAN),
            y: at[1].to_f64().unwrap_or(f64::NAN),
            z: at[2].to_f64().unwrap_or(f64::NAN),
            magnitude: mag.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = [g[0] / mag, g[1] / mag, g[2] / mag];
    let theta = n[1].atan2(n[0]);
    let phi_angle = n[2].max(-T::one()).min(T::one()).acos();
    Ok(NormalInfo {
        normal: n,
        theta,
        phi_angle,
    })
}

/// Normal angles of an implicit interface at `point`.
pub fn normal_angles<T: Scalar>(implicit: &Implicit<T>, point: &Vec3<T>) -> Result<(T, T), GeometryError> {
    let info = angles_from_gradient(&implicit.gradient(point), point)?;
    Ok((info.theta, info.phi_angle))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Sphere,
    Hemisphere,
    Ellipsoid,
    Cylinder,
    Torus,
    FlowerPrism,
    Apple,
    Acorn,
    PentagonStarPrism,
    Custom,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Sphere => "sphere",
            ShapeKind::Hemisphere => "hemisphere",
            ShapeKind::Ellipsoid => "ellipsoid",
            ShapeKind::Cylinder => "cylinder",
            ShapeKind::Torus => "torus",
            ShapeKind::FlowerPrism => "flower_prism",
            ShapeKind::Apple => "apple",
            ShapeKind::Acorn => "acorn",
            ShapeKind::PentagonStarPrism => "pentagon_star_prism",
            ShapeKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    HasSingularities,
}

/// Geometric singularity of an interface: cusps, tips and sharp edges.
#[derive(Debug, Clone, PartialEq)]
pub enum SingularFeature<T> {
    Point(Vec3<T>),
    Segment(Vec3<T>, Vec3<T>),
    /// Horizontal circle of the given radius centred at `center`.
    Circle {
        center: Vec3<T>,
        radius: T,
    },
}

impl<T: Scalar> SingularFeature<T> {
    pub fn distance(&self, p: &Vec3<T>) -> T {
        match self {
            SingularFeature::Point(q) => norm(&sub(p, q)),
            SingularFeature::Segment(a, b) => {
                let ab = sub(b, a);
                let ap = sub(p, a);
                let len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
                let t = if len2 > T::zero() {
                    ((ap[0] * ab[0] + ap[1] * ab[1] + ap[2] * ab[2]) / len2)
                        .max(T::zero())
                        .min(T::one())
                } else {
                    T::zero()
                };
                let q = [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]];
                norm(&sub(p, &q))
            }
            SingularFeature::Circle { center, radius } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                let dz = p[2] - center[2];
                let r = (dx * dx + dy * dy).sqrt() - *radius;
                (r * r + dz * dz).sqrt()
            }
        }
    }
}

/// Interface surface with its catalog tag and singular features.
#[derive(Debug, Clone)]
pub struct InterfaceShape<T: Scalar> {
    pub kind: ShapeKind,
    pub implicit: Implicit<T>,
    pub smoothness: Smoothness,
    pub features: Vec<SingularFeature<T>>,
}

impl<T: Scalar> InterfaceShape<T> {
    pub fn new(kind: ShapeKind, implicit: Implicit<T>, features: Vec<SingularFeature<T>>) -> Self {
        let smoothness = if features.is_empty() {
            Smoothness::Smooth
        } else {
            Smoothness::HasSingularities
        };
        Self {
            kind,
            implicit,
            smoothness,
            features,
        }
    }

    pub fn value(&self, p: &Vec3<T>) -> T {
        self.implicit.value(p)
    }

    pub fn gradient(&self, p: &Vec3<T>) -> Vec3<T> {
        self.implicit.gradient(p)
    }

    /// Same surface with the sides exchanged (φ → −φ).
    pub fn complement(self) -> Self {
        Self {
            implicit: Implicit::Negated(Box::new(self.implicit)),
            ..self
        }
    }

    /// Distance to the nearest singular feature, infinite for smooth shapes.
    pub fn singular_distance(&self, p: &Vec3<T>) -> T {
        self.features
            .iter()
            .map(|f| f.distance(p))
            .fold(T::infinity(), |a, b| a.min(b))
    }

    /// x² + y² + z² = r²
    pub fn sphere(radius: T) -> Self {
        let one = T::one();
        Self::new(
            ShapeKind::Sphere,
            Implicit::Quadric {
                coeffs: [one; 3],
                center: [T::zero(); 3],
                level: radius * radius,
            },
            Vec::new(),
        )
    }

    /// Upper half (z ≥ 0) of the ball of radius r.
    pub fn hemisphere(radius: T) -> Self {
        let one = T::one();
        let o = T::zero();
        Self::new(
            ShapeKind::Hemisphere,
            Implicit::Max(vec![
                Implicit::Quadric {
                    coeffs: [one; 3],
                    center: [o; 3],
                    level: radius * radius,
                },
                Implicit::HalfSpace {
                    normal: [o, o, -one],
                    offset: o,
                },
            ]),
            vec![SingularFeature::Circle { center: [o; 3], radius }],
        )
    }

    /// x²/a² + y²/b² + z²/c² = 1
    pub fn ellipsoid(semi_axes: Vec3<T>) -> Self {
        let one = T::one();
        let coeffs = std::array::from_fn(|d| one / (semi_axes[d] * semi_axes[d]));
        Self::new(
            ShapeKind::Ellipsoid,
            Implicit::Quadric {
                coeffs,
                center: [T::zero(); 3],
                level: one,
            },
            Vec::new(),
        )
    }

    /// Solid cylinder x² + y² ≤ r², z_lo ≤ z ≤ z_hi.
    pub fn cylinder(radius: T, z_lo: T, z_hi: T) -> Self {
        let one = T::one();
        let o = T::zero();
        Self::new(
            ShapeKind::Cylinder,
            Implicit::Max(vec![
                Implicit::ZCylinder { radius },
                Implicit::HalfSpace {
                    normal: [o, o, -one],
                    offset: -z_lo,
                },
                Implicit::HalfSpace {
                    normal: [o, o, one],
                    offset: z_hi,
                },
            ]),
            vec![
                SingularFeature::Circle {
                    center: [o, o, z_lo],
                    radius,
                },
                SingularFeature::Circle {
                    center: [o, o, z_hi],
                    radius,
                },
            ],
        )
    }

    /// (R − √(x²+y²))² + z² = r²
    pub fn torus(major: T, minor: T) -> Self {
        Self::new(ShapeKind::Torus, Implicit::Torus { major, minor }, Vec::new())
    }

    /// r = base + amplitude·sin(petals·θ), |z| ≤ half_height.
    pub fn flower_prism(base: T, amplitude: T, petals: T, half_height: T) -> Self {
        let one = T::one();
        let o = T::zero();
        let implicit = Implicit::Max(vec![
            Implicit::Flower {
                base,
                amplitude,
                petals,
            },
            Implicit::HalfSpace {
                normal: [o, o, one],
                offset: half_height,
            },
            Implicit::HalfSpace {
                normal: [o, o, -one],
                offset: half_height,
            },
        ]);
        let samples = 720usize;
        let mut features = Vec::with_capacity(2 * samples);
        for &z in &[half_height, -half_height] {
            let point = |i: usize| {
                let th = T::TAU() * lit::<T>(i as f64) / lit::<T>(samples as f64);
                let r = base + amplitude * (petals * th).sin();
                [r * th.cos(), r * th.sin(), z]
            };
            for i in 0..samples {
                features.push(SingularFeature::Segment(point(i), point(i + 1)));
            }
        }
        Self::new(ShapeKind::FlowerPrism, implicit, features)
    }

    /// ρ = c(1 − cos φ); cusp at the origin.
    pub fn apple(c: T) -> Self {
        Self::new(
            ShapeKind::Apple,
            Implicit::Apple { c },
            vec![SingularFeature::Point([T::zero(); 3])],
        )
    }

    /// Ball cap above z = 0 joined to a downward cone below it; tip at
    /// (0, 0, q). The cone opening is chosen so both pieces meet at z = 0.
    pub fn acorn(q: T, g: T, radius: T) -> Self {
        let o = T::zero();
        let rim = (radius * radius - g * g).sqrt();
        let slope = rim / (-q);
        Self::new(
            ShapeKind::Acorn,
            Implicit::Max(vec![
                Implicit::Ball {
                    center: [o, o, g],
                    radius,
                },
                Implicit::Cone { apex_z: q, slope },
            ]),
            vec![
                SingularFeature::Circle {
                    center: [o; 3],
                    radius: rim,
                },
                SingularFeature::Point([o, o, q]),
            ],
        )
    }

    /// Pentagon star extruded over |z| ≤ half_height.
    pub fn pentagon_star_prism(tip_radius: T, tip_angle: T, rotation: T, half_height: T) -> Self {
        let one = T::one();
        let o = T::zero();
        let implicit = Implicit::Max(vec![
            Implicit::Star {
                tip_radius,
                tip_angle,
                rotation,
            },
            Implicit::HalfSpace {
                normal: [o, o, one],
                offset: half_height,
            },
            Implicit::HalfSpace {
                normal: [o, o, -one],
                offset: half_height,
            },
        ]);
        let sector = T::PI() * lit(0.4);
        let half = tip_angle * lit(0.5);
        let inner = tip_radius * half.sin() / (half + sector * lit(0.5)).sin();
        let mut vertices = Vec::with_capacity(10);
        for k in 0..5 {
            let a = rotation + sector * lit::<T>(k as f64);
            vertices.push([tip_radius * a.cos(), tip_radius * a.sin()]);
            let b = a + sector * lit(0.5);
            vertices.push([inner * b.cos(), inner * b.sin()]);
        }
        let mut features = Vec::new();
        for v in &vertices {
            features.push(SingularFeature::Segment(
                [v[0], v[1], -half_height],
                [v[0], v[1], half_height],
            ));
        }
        for &z in &[half_height, -half_height] {
            for i in 0..vertices.len() {
                let a = vertices[i];
                let b = vertices[(i + 1) % vertices.len()];
                features.push(SingularFeature::Segment([a[0], a[1], z], [b[0], b[1], z]));
            }
        }
        Self::new(ShapeKind::PentagonStarPrism, implicit, features)
    }

    /// User-supplied implicit function; gradients by central differences.
    pub fn custom(f: ImplicitFn<T>, grid_spacing: T) -> Self {
        Self::new(ShapeKind::Custom, Implicit::custom(f, grid_spacing), Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn fd_gradient(s: &Implicit<f64>, p: &[f64; 3]) -> [f64; 3] {
        let h = 1e-6;
        std::array::from_fn(|d| {
            let mut a = *p;
            let mut b = *p;
            a[d] += h;
            b[d] -= h;
            (s.value(&a) - s.value(&b)) / (2.0 * h)
        })
    }

    #[test]
    fn analytic_gradients_match_differences() {
        let shapes: Vec<Implicit<f64>> = vec![
            InterfaceShape::sphere(2.0).implicit,
            InterfaceShape::ellipsoid([2.0, 3.0, 1.0]).implicit,
            InterfaceShape::torus(4.0, 2.0).implicit,
            Implicit::Apple { c: 1.9 },
            Implicit::Cone {
                apex_z: -0.5,
                slope: 2.0,
            },
            Implicit::Flower {
                base: 2.5,
                amplitude: 5.0 / 7.0,
                petals: 5.0,
            },
            Implicit::Star {
                tip_radius: 6.0 / 7.0,
                tip_angle: PI / 5.0,
                rotation: PI / 7.0,
            },
            Implicit::Ball {
                center: [0.0, 0.0, 0.5],
                radius: 15.0 / 7.0,
            },
        ];
        let points = [[0.31, -0.72, 0.45], [1.7, 0.9, -0.3], [-2.2, 1.1, 0.8]];
        for s in &shapes {
            for p in &points {
                let g = s.gradient(p);
                let fd = fd_gradient(s, p);
                for d in 0..3 {
                    assert!((g[d] - fd[d]).abs() < 1e-6, "{s:?} at {p:?}: {g:?} vs {fd:?}");
                }
            }
        }
    }

    #[test]
    fn normal_angle_examples() {
        let plane = |n: [f64; 3]| Implicit::HalfSpace { normal: n, offset: 0.0 };
        let (t, p) = normal_angles(&plane([0.0, 0.0, 1.0]), &[0.0; 3]).unwrap();
        assert_eq!((t, p), (0.0, 0.0));
        let (t, p) = normal_angles(&plane([1.0, 0.0, 0.0]), &[0.0; 3]).unwrap();
        assert!(t.abs() < 1e-15 && (p - PI / 2.0).abs() < 1e-15);
        let (t, p) = normal_angles(&plane([1.0, 1.0, 1.0]), &[0.0; 3]).unwrap();
        // invert n(θ, φ) numerically: reconstruct and compare with the unit vector
        let n = [p.sin() * t.cos(), p.sin() * t.sin(), p.cos()];
        let s = 1.0 / 3f64.sqrt();
        for d in 0..3 {
            assert!((n[d] - s).abs() < 1e-14);
        }
        assert!((t - PI / 4.0).abs() < 1e-14);
        assert!((p - s.acos()).abs() < 1e-14);
    }

    #[test]
    fn degenerate_normal_is_reported() {
        let e = normal_angles(&InterfaceShape::sphere(2.0).implicit, &[0.0; 3]);
        assert!(matches!(e, Err(GeometryError::DegenerateNormal { .. })));
    }

    #[test]
    fn star_tips_and_inner_vertices_lie_on_the_interface() {
        let s = InterfaceShape::pentagon_star_prism(6.0 / 7.0, PI / 5.0, PI / 7.0, 0.5);
        for k in 0..5 {
            let a = PI / 7.0 + 0.4 * PI * k as f64;
            let tip = [6.0 / 7.0 * a.cos(), 6.0 / 7.0 * a.sin(), 0.0];
            assert!(s.implicit.value(&tip).abs() < 1e-14);
            let b = a + 0.2 * PI;
            let ri = 6.0 / 7.0 * (PI / 10.0).sin() / (PI / 10.0 + PI / 5.0).sin();
            let inner = [ri * b.cos(), ri * b.sin(), 0.0];
            assert!(s.implicit.value(&inner).abs() < 1e-14);
        }
        assert!(s.value(&[0.0; 3]) < 0.0);
        assert!(s.value(&[1.0, 1.0, 0.0]) > 0.0);
        assert!(s.value(&[0.0, 0.0, 0.7]) > 0.0);
    }

    #[test]
    fn acorn_is_closed_and_pieces_meet_at_rim() {
        let s = InterfaceShape::acorn(-6.0 / 7.0, 0.5, 15.0 / 7.0);
        let rim = ((15.0f64 / 7.0).powi(2) - 0.25).sqrt();
        assert!(s.value(&[rim, 0.0, 0.0]).abs() < 1e-12);
        assert!(s.value(&[0.0, 0.0, -6.0 / 7.0]).abs() < 1e-12);
        assert!(s.value(&[0.0, 0.0, 0.5 + 15.0 / 7.0]).abs() < 1e-12);
        assert!(s.value(&[0.0, 0.0, 0.0]) < 0.0);
        assert!(s.value(&[0.0, 0.0, -1.0]) > 0.0);
        assert!(s.value(&[0.0, 0.0, 4.0]) > 0.0);
    }

    #[test]
    fn feature_distances() {
        let c = SingularFeature::<f64>::Circle {
            center: [0.0, 0.0, 1.0],
            radius: 2.0,
        };
        assert!((c.distance(&[0.0, 2.0, 2.0]) - 1.0).abs() < 1e-15);
        let s = SingularFeature::<f64>::Segment([0.0; 3], [0.0, 0.0, 1.0]);
        assert!((s.distance(&[3.0, 4.0, 0.5]) - 5.0).abs() < 1e-15);
        assert!((s.distance(&[0.0, 0.0, 3.0]) - 2.0).abs() < 1e-15);
    }
}
