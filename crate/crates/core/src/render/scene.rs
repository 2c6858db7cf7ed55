//! Scene description: axis-aligned rectangles and boxes with Lambertian
//! albedo and/or emission, a pinhole camera, and brute-force ray intersection.

use serde::{Deserialize, Serialize};

use super::vec3::{Rgb, Vec3};
use super::RenderError;

pub const RAY_T_MIN: f64 = 1e-7;

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Material {
    #[serde(default)]
    pub albedo: [f64; 3],
    #[serde(default)]
    pub emission: [f64; 3],
}

impl Material {
    pub fn albedo_rgb(&self) -> Rgb {
        Rgb::from_array(self.albedo)
    }

    pub fn emission_rgb(&self) -> Rgb {
        Rgb::from_array(self.emission)
    }

    pub fn is_emissive(&self) -> bool {
        self.emission.iter().any(|&c| c > 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two in-plane axes, in ascending index order.
    fn others(self) -> (usize, usize) {
        match self {
            Axis::X => (1, 2),
            Axis::Y => (0, 2),
            Axis::Z => (0, 1),
        }
    }
}

/// Geometry is restricted to axis-aligned pieces: planar rectangles
/// perpendicular to one axis, and boxes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Shape {
    Rect {
        axis: Axis,
        level: f64,
        /// Bounds on the two in-plane coordinates, ascending axis order.
        min: [f64; 2],
        max: [f64; 2],
    },
    #[serde(rename = "box")]
    Cuboid { min: [f64; 3], max: [f64; 3] },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Surface {
    #[serde(default)]
    pub name: String,
    pub shape: Shape,
    pub material: Material,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Camera {
    pub position: [f64; 3],
    pub look_at: [f64; 3],
    #[serde(default = "default_up")]
    pub up: [f64; 3],
    /// Vertical field of view, degrees.
    pub fov_deg: f64,
    pub width: u32,
    pub height: u32,
}

fn default_up() -> [f64; 3] {
    [0.0, 1.0, 0.0]
}

/// Camera basis and projection helpers.
pub struct CameraFrame {
    pub position: Vec3,
    forward: Vec3,
    right: Vec3,
    up: Vec3,
    tan_half: f64,
    aspect: f64,
    width: u32,
    height: u32,
}

impl CameraFrame {
    pub fn new(cam: &Camera) -> Self {
        let position = Vec3::from_array(cam.position);
        let forward = (Vec3::from_array(cam.look_at) - position).normalized();
        // World +x maps to image right when looking along +z with +y up.
        let right = Vec3::from_array(cam.up).cross(forward).normalized();
        let up = forward.cross(right);
        Self {
            position,
            forward,
            right,
            up,
            tan_half: (cam.fov_deg.to_radians() * 0.5).tan(),
            aspect: cam.width as f64 / cam.height as f64,
            width: cam.width,
            height: cam.height,
        }
    }

    /// Ray through pixel (px, py) at sub-pixel offset `uv ∈ [−1/2, 1/2]²`
    /// (+u right, +v up within the pixel).
    pub fn ray(&self, px: u32, py: u32, u: f64, v: f64) -> (Vec3, Vec3) {
        let sx = 2.0 * (px as f64 + 0.5 + u) / self.width as f64 - 1.0;
        let sy = 1.0 - 2.0 * (py as f64 + 0.5 - v) / self.height as f64;
        let dir = (self.forward
            + self.right * (sx * self.tan_half * self.aspect)
            + self.up * (sy * self.tan_half))
            .normalized();
        (self.position, dir)
    }

    /// Continuous pixel coordinates of a world point, if in front of the
    /// camera.
    pub fn project(&self, p: Vec3) -> Option<(f64, f64)> {
        let v = p - self.position;
        let z = v.dot(self.forward);
        if z <= 0.0 {
            return None;
        }
        let sx = v.dot(self.right) / (z * self.tan_half * self.aspect);
        let sy = v.dot(self.up) / (z * self.tan_half);
        let px = (sx + 1.0) * 0.5 * self.width as f64 - 0.5;
        let py = (1.0 - sy) * 0.5 * self.height as f64 - 0.5;
        Some((px, py))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scene {
    pub surfaces: Vec<Surface>,
    pub camera: Camera,
}

#[derive(Clone, Copy, Debug)]
pub struct Hit {
    pub t: f64,
    pub point: Vec3,
    /// Unit normal flipped to face the incoming ray (all materials are
    /// two-sided).
    pub normal: Vec3,
    pub surface: usize,
}

impl Scene {
    pub fn from_json(json: &str) -> Result<Scene, RenderError> {
        let scene: Scene = serde_json::from_str(json).map_err(|e| RenderError::BadScene {
            reason: e.to_string(),
        })?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        if self.emitters().is_empty() {
            return Err(RenderError::BadScene {
                reason: "scene has no emitter".into(),
            });
        }
        for s in &self.surfaces {
            if s.material.is_emissive() && !matches!(s.shape, Shape::Rect { .. }) {
                return Err(RenderError::BadScene {
                    reason: format!("emitter `{}` must be a rect (area-light sampling)", s.name),
                });
            }
            if s.material.albedo.iter().any(|&a| !(0.0..=1.0).contains(&a)) {
                return Err(RenderError::BadScene {
                    reason: format!("surface `{}` has albedo outside [0,1]", s.name),
                });
            }
        }
        Ok(())
    }

    /// Indices of emissive surfaces.
    pub fn emitters(&self) -> Vec<usize> {
        self.surfaces
            .iter()
            .enumerate()
            .filter(|(_, s)| s.material.is_emissive())
            .map(|(i, _)| i)
            .collect()
    }

    /// Largest emission component over the scene (firefly-clamp reference).
    pub fn max_emission(&self) -> f64 {
        self.surfaces
            .iter()
            .flat_map(|s| s.material.emission.iter().copied())
            .fold(0.0, f64::max)
    }

    /// Nearest intersection with `t ∈ (RAY_T_MIN, t_max)`.
    pub fn intersect(&self, origin: Vec3, dir: Vec3, t_max: f64) -> Option<Hit> {
        let mut best: Option<Hit> = None;
        for (i, s) in self.surfaces.iter().enumerate() {
            let limit = best.map_or(t_max, |h| h.t);
            if let Some((t, normal)) = intersect_shape(&s.shape, origin, dir, limit) {
                best = Some(Hit {
                    t,
                    point: origin + dir * t,
                    normal,
                    surface: i,
                });
            }
        }
        best
    }

    /// Whether anything other than `skip` blocks the segment of length
    /// `dist` from `origin` along `dir`.
    pub fn occluded(&self, origin: Vec3, dir: Vec3, dist: f64, skip: usize) -> bool {
        let limit = dist * (1.0 - 1e-9);
        self.surfaces.iter().enumerate().any(|(i, s)| {
            i != skip && intersect_shape(&s.shape, origin, dir, limit).is_some()
        })
    }
}

fn intersect_shape(shape: &Shape, origin: Vec3, dir: Vec3, t_max: f64) -> Option<(f64, Vec3)> {
    match shape {
        Shape::Rect {
            axis,
            level,
            min,
            max,
        } => {
            let k = axis.index();
            let dk = dir.axis(k);
            if dk == 0.0 {
                return None;
            }
            let t = (level - origin.axis(k)) / dk;
            if t <= RAY_T_MIN || t >= t_max {
                return None;
            }
            let p = origin + dir * t;
            let (a, b) = axis.others();
            if p.axis(a) < min[0] || p.axis(a) > max[0] || p.axis(b) < min[1] || p.axis(b) > max[1]
            {
                return None;
            }
            let mut normal = Vec3::ZERO;
            match k {
                0 => normal.x = 1.0,
                1 => normal.y = 1.0,
                _ => normal.z = 1.0,
            }
            if normal.dot(dir) > 0.0 {
                normal = -normal;
            }
            Some((t, normal))
        }
        Shape::Cuboid { min, max } => {
            // Slab test tracking the axis of the entering face.
            let mut t_near = f64::NEG_INFINITY;
            let mut t_far = f64::INFINITY;
            let mut near_axis = 0usize;
            let mut far_axis = 0usize;
            for k in 0..3 {
                let o = origin.axis(k);
                let d = dir.axis(k);
                if d == 0.0 {
                    if o < min[k] || o > max[k] {
                        return None;
                    }
                    continue;
                }
                let mut t0 = (min[k] - o) / d;
                let mut t1 = (max[k] - o) / d;
                if t0 > t1 {
                    std::mem::swap(&mut t0, &mut t1);
                }
                if t0 > t_near {
                    t_near = t0;
                    near_axis = k;
                }
                if t1 < t_far {
                    t_far = t1;
                    far_axis = k;
                }
                if t_near > t_far {
                    return None;
                }
            }
            let (t, k) = if t_near > RAY_T_MIN {
                (t_near, near_axis)
            } else if t_far > RAY_T_MIN {
                (t_far, far_axis) // origin inside the box
            } else {
                return None;
            };
            if t >= t_max {
                return None;
            }
            let mut normal = Vec3::ZERO;
            match k {
                0 => normal.x = 1.0,
                1 => normal.y = 1.0,
                _ => normal.z = 1.0,
            }
            if normal.dot(dir) > 0.0 {
                normal = -normal;
            }
            Some((t, normal))
        }
    }
}

impl Shape {
    /// Surface area (rects only; used for light sampling).
    pub fn rect_area(&self) -> Option<f64> {
        match self {
            Shape::Rect { min, max, .. } => Some((max[0] - min[0]) * (max[1] - min[1])),
            Shape::Cuboid { .. } => None,
        }
    }

    /// Point on a rect at in-plane parameters (s, t) ∈ [0,1]², with its
    /// geometric normal (unflipped).
    pub fn rect_point(&self, s: f64, t: f64) -> Option<(Vec3, Vec3)> {
        match self {
            Shape::Rect {
                axis,
                level,
                min,
                max,
            } => {
                let (a, b) = axis.others();
                let mut p = [0.0; 3];
                p[axis.index()] = *level;
                p[a] = min[0] + s * (max[0] - min[0]);
                p[b] = min[1] + t * (max[1] - min[1]);
                let mut n = [0.0; 3];
                n[axis.index()] = 1.0;
                Some((Vec3::from_array(p), Vec3::from_array(n)))
            }
            Shape::Cuboid { .. } => None,
        }
    }
}

/// The built-in Cornell-Box-class scene: white floor/ceiling/back wall, red
/// left wall, green right wall, a warm area light set into the ceiling, and
/// two axis-aligned boxes.
pub fn cornell_box() -> Scene {
    Scene::from_json(include_str!("../../assets/cornell_box.json"))
        .expect("built-in scene parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_scene_is_valid() {
        let scene = cornell_box();
        assert!(!scene.emitters().is_empty());
        assert_eq!(scene.camera.width, 128);
    }

    #[test]
    fn rect_intersection_and_two_sided_normal() {
        let shape = Shape::Rect {
            axis: Axis::Y,
            level: 1.0,
            min: [0.0, 0.0],
            max: [1.0, 1.0],
        };
        let from_below =
            intersect_shape(&shape, Vec3::new(0.5, 0.0, 0.5), Vec3::new(0.0, 1.0, 0.0), 1e9)
                .unwrap();
        assert!((from_below.0 - 1.0).abs() < 1e-12);
        assert_eq!(from_below.1, Vec3::new(0.0, -1.0, 0.0));
        let from_above =
            intersect_shape(&shape, Vec3::new(0.5, 2.0, 0.5), Vec3::new(0.0, -1.0, 0.0), 1e9)
                .unwrap();
        assert_eq!(from_above.1, Vec3::new(0.0, 1.0, 0.0));
        // Miss outside the bounds.
        assert!(intersect_shape(
            &shape,
            Vec3::new(2.0, 0.0, 0.5),
            Vec3::new(0.0, 1.0, 0.0),
            1e9
        )
        .is_none());
    }

    #[test]
    fn box_intersection_from_inside_and_outside() {
        let shape = Shape::Cuboid {
            min: [0.0, 0.0, 0.0],
            max: [1.0, 1.0, 1.0],
        };
        let outside =
            intersect_shape(&shape, Vec3::new(-1.0, 0.5, 0.5), Vec3::new(1.0, 0.0, 0.0), 1e9)
                .unwrap();
        assert!((outside.0 - 1.0).abs() < 1e-12);
        assert_eq!(outside.1, Vec3::new(-1.0, 0.0, 0.0));
        let inside =
            intersect_shape(&shape, Vec3::new(0.5, 0.5, 0.5), Vec3::new(1.0, 0.0, 0.0), 1e9)
                .unwrap();
        assert!((inside.0 - 0.5).abs() < 1e-12);
        // Normal faces back toward the ray origin.
        assert_eq!(inside.1, Vec3::new(-1.0, 0.0, 0.0));
    }

    #[test]
    fn project_inverts_ray() {
        let scene = cornell_box();
        let frame = CameraFrame::new(&scene.camera);
        let (o, d) = frame.ray(37, 91, 0.2, -0.3);
        let target = o + d * 2.5;
        let (px, py) = frame.project(target).unwrap();
        assert!((px - (37.0 + 0.2)).abs() < 1e-9, "px {px}");
        assert!((py - (91.0 + 0.3)).abs() < 1e-9, "py {py}");
    }
}
