use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Instance, RawInstance};

/// Random instance with students `s1..`, courses `c1..`.
///
/// Each pair is an edge with probability `edge_density` (clamped to `[0, 1]`), every preference
/// list is an independent uniform shuffle of the vertex's neighbors, and capacities are uniform
/// in `1..=max_cap`. The result depends only on the arguments.
pub fn random_instance(n_students: usize, n_courses: usize, max_cap: u32, edge_density: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = edge_density.clamp(0.0, 1.0);
    let max_cap = max_cap.max(1) as i64;

    let mut student_prefs = vec![Vec::new(); n_students];
    let mut course_prefs = vec![Vec::new(); n_courses];
    for (a, list) in student_prefs.iter_mut().enumerate() {
        for (b, back) in course_prefs.iter_mut().enumerate() {
            if rng.gen_bool(density) {
                list.push(b);
                back.push(a);
            }
        }
    }
    for list in student_prefs.iter_mut().chain(course_prefs.iter_mut()) {
        list.shuffle(&mut rng);
    }
    let student_caps = (0..n_students).map(|_| rng.gen_range(1..=max_cap)).collect();
    let course_caps = (0..n_courses).map(|_| rng.gen_range(1..=max_cap)).collect();

    let raw = RawInstance {
        students: (1..=n_students).map(|i| format!("s{i}")).collect(),
        courses: (1..=n_courses).map(|i| format!("c{i}")).collect(),
        student_caps,
        course_caps,
        student_prefs,
        course_prefs,
    };
    Instance::from_raw(raw).expect("generated instances are valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_density_is_complete() {
        let inst = random_instance(2, 2, 1, 1.0, 1);
        assert_eq!(inst.num_edges(), 4);
        assert_eq!(inst.total_cap(crate::Side::Student), 2);
        assert_eq!(inst.total_cap(crate::Side::Course), 2);
    }

    #[test]
    fn empty_and_deterministic() {
        let empty = random_instance(0, 0, 1, 0.5, 7);
        assert_eq!(empty.num_edges(), 0);
        let x = random_instance(3, 3, 2, 0.5, 42);
        let y = random_instance(3, 3, 2, 0.5, 42);
        assert_eq!(x.to_raw(), y.to_raw());
        assert!(x.to_raw().student_caps.iter().all(|&c| (1..=2).contains(&c)));
    }
}
