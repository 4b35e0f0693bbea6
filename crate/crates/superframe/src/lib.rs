pub mod fft;
pub mod output;
pub mod runs;
pub mod scenario;
pub mod schrodinger;
