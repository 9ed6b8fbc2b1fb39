pub mod bench;
pub mod exact;
pub mod float;
pub mod formats;
pub mod hiprec;
pub mod litbench;
pub mod math;
pub mod par;
pub mod tapered;
