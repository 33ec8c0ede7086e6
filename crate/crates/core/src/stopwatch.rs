//! Wall-clock measurement that degrades to zero without `std`.

use core::time::Duration;

#[cfg(feature = "std")]
pub struct Stopwatch(std::time::Instant);

#[cfg(not(feature = "std"))]
pub struct Stopwatch;

impl Stopwatch {
    #[cfg(feature = "std")]
    pub fn start() -> Self {
        Stopwatch(std::time::Instant::now())
    }

    #[cfg(not(feature = "std"))]
    pub fn start() -> Self {
        Stopwatch
    }

    #[cfg(feature = "std")]
    pub fn elapsed(&self) -> Duration {
        self.0.elapsed()
    }

    #[cfg(not(feature = "std"))]
    pub fn elapsed(&self) -> Duration {
        Duration::ZERO
    }
}
