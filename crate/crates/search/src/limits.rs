use std::time::{Duration, Instant};

/// Resource limits for one solve. Limits are checked at every node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub cpu: Option<Duration>,
    pub wall: Option<Duration>,
    pub nodes: Option<u64>,
    /// Set when running without any limit is intended.
    pub unbounded: bool,
}

impl Limits {
    pub fn unbounded() -> Limits {
        Limits { cpu: None, wall: None, nodes: None, unbounded: true }
    }

    pub fn cpu_secs(secs: f64) -> Limits {
        Limits { cpu: Some(Duration::from_secs_f64(secs)), ..Limits::none() }
    }

    pub fn wall_secs(secs: f64) -> Limits {
        Limits { wall: Some(Duration::from_secs_f64(secs)), ..Limits::none() }
    }

    pub fn nodes(n: u64) -> Limits {
        Limits { nodes: Some(n), ..Limits::none() }
    }

    fn none() -> Limits {
        Limits { cpu: None, wall: None, nodes: None, unbounded: false }
    }

    pub fn with_cpu_secs(mut self, secs: f64) -> Limits {
        self.cpu = Some(Duration::from_secs_f64(secs));
        self
    }

    pub fn with_wall_secs(mut self, secs: f64) -> Limits {
        self.wall = Some(Duration::from_secs_f64(secs));
        self
    }

    pub fn with_nodes(mut self, n: u64) -> Limits {
        self.nodes = Some(n);
        self
    }

    pub fn is_valid(&self) -> bool {
        self.unbounded || self.cpu.is_some() || self.wall.is_some() || self.nodes.is_some()
    }
}

/// Which limit stopped a search.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LimitHit {
    Cpu,
    Wall,
    Nodes,
}

/// CPU time consumed by this process.
pub fn process_cpu_time() -> Duration {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: `ts` is a valid out-pointer for the duration of the call.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_PROCESS_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return Duration::ZERO;
    }
    Duration::new(ts.tv_sec as u64, ts.tv_nsec as u32)
}

pub(crate) struct Clock {
    wall0: Instant,
    cpu0: Duration,
}

impl Clock {
    pub fn start() -> Clock {
        Clock { wall0: Instant::now(), cpu0: process_cpu_time() }
    }

    pub fn wall(&self) -> Duration {
        self.wall0.elapsed()
    }

    pub fn cpu(&self) -> Duration {
        process_cpu_time().saturating_sub(self.cpu0)
    }

    pub fn exceeded(&self, limits: &Limits, nodes: u64) -> Option<LimitHit> {
        if limits.nodes.is_some_and(|n| nodes >= n) {
            return Some(LimitHit::Nodes);
        }
        if limits.wall.is_some_and(|w| self.wall() >= w) {
            return Some(LimitHit::Wall);
        }
        if limits.cpu.is_some_and(|c| self.cpu() >= c) {
            return Some(LimitHit::Cpu);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cpu_clock_advances() {
        let a = process_cpu_time();
        let mut x = 0u64;
        for i in 0..2_000_000u64 {
            x = x.wrapping_add(i * i);
        }
        std::hint::black_box(x);
        assert!(process_cpu_time() >= a);
    }

    #[test]
    fn validity() {
        assert!(!Limits::none().is_valid());
        assert!(Limits::unbounded().is_valid());
        assert!(Limits::nodes(3).is_valid());
    }
}
