//! Grayscale image filtering in the frequency domain: pad to
//! power-of-two dimensions, transform, swap quadrants so the zero
//! frequency sits at the grid center, multiply by a disk mask, invert,
//! crop back to the source dimensions.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::fft2d::{fft2d_with_workers, ifft2d_with_workers, ComplexGrid};

/// Integer-valued pixel raster, row-major, values in `[0, max_val]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    max_val: u16,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, max_val: u16, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidGrid {
                rows: height,
                cols: width,
                len: pixels.len(),
            });
        }
        if max_val == 0 {
            return Err(Error::InvalidParameters("max_val must be positive".into()));
        }
        if let Some(&value) = pixels.iter().find(|&&p| p > max_val) {
            return Err(Error::PixelOutOfRange {
                value: value as u32,
                max_val,
            });
        }
        Ok(Self {
            width,
            height,
            max_val,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn max_val(&self) -> u16 {
        self.max_val
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    /// Pixel at column `x`, row `y`.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }
}

/// Row-major real-valued grid; spectra and filter masks.
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealGrid {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::InvalidGrid {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// What the disk of radius `b` does to the frequencies it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    /// Keep the disk around the center, zero everything outside: the
    /// smoothing filter.
    LowPass,
    /// Zero the disk, keep everything outside; the complement of
    /// [`FilterMode::LowPass`].
    ZeroDisk,
}

/// Disk filter parameters: radius `b`, optional `(row, col)` center
/// (defaults to the grid center), and the mask mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub radius: f64,
    pub center: Option<(f64, f64)>,
    pub mode: FilterMode,
}

impl FilterSpec {
    pub fn new(radius: f64, mode: FilterMode) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidParameters(format!(
                "filter radius must be nonnegative, got {radius}"
            )));
        }
        Ok(Self {
            radius,
            center: None,
            mode,
        })
    }
}

/// An image lifted into a power-of-two complex grid, remembering the
/// source dimensions for the final crop.
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedImage {
    pub grid: ComplexGrid,
    pub source_width: usize,
    pub source_height: usize,
}

/// Places the pixels as real values in the top-left block of a grid
/// whose dimensions are the next powers of two (unchanged when already a
/// power of two); the rest is zero-filled.
pub fn pad_pow2(image: &GrayImage) -> PaddedImage {
    let rows = image.height().next_power_of_two();
    let cols = image.width().next_power_of_two();
    let mut grid = ComplexGrid::zeros(rows, cols).expect("padded dims are positive");
    for y in 0..image.height() {
        for x in 0..image.width() {
            grid.set(y, x, Complex::new(image.pixel(x, y) as f64, 0.0));
        }
    }
    PaddedImage {
        grid,
        source_width: image.width(),
        source_height: image.height(),
    }
}

/// Elementwise modulus `sqrt(re^2 + im^2)`.
pub fn spectrum(grid: &ComplexGrid) -> RealGrid {
    RealGrid::new(
        grid.rows(),
        grid.cols(),
        grid.data().iter().map(|v| v.norm()).collect(),
    )
    .expect("grid dims are valid")
}

/// Modular rotation by half a period along both axes; moves index (0,0)
/// to the grid center. Self-inverse for every power-of-two dimension
/// (a length-1 axis rotates by zero).
fn rotate_half(grid: &ComplexGrid) -> ComplexGrid {
    let (rows, cols) = (grid.rows(), grid.cols());
    let mut out = ComplexGrid::zeros(rows, cols).expect("same dims");
    for r in 0..rows {
        for c in 0..cols {
            out.set((r + rows / 2) % rows, (c + cols / 2) % cols, grid.get(r, c));
        }
    }
    out
}

/// Swaps quadrants so index (0,0) moves to `(rows/2, cols/2)`;
/// self-inverse. Requires even dimensions.
pub fn center_shift(grid: &ComplexGrid) -> Result<ComplexGrid> {
    if grid.rows() % 2 != 0 {
        return Err(Error::InvalidSize(grid.rows()));
    }
    if grid.cols() % 2 != 0 {
        return Err(Error::InvalidSize(grid.cols()));
    }
    Ok(rotate_half(grid))
}

/// Builds the `{0,1}` disk mask over a `rows x cols` grid. In
/// [`FilterMode::ZeroDisk`] the mask is 0 where the distance from the
/// center is at most the radius and 1 elsewhere; [`FilterMode::LowPass`]
/// is the pointwise complement. The default center is
/// `(rows/2, cols/2)`.
pub fn build_filter_mask(rows: usize, cols: usize, spec: &FilterSpec) -> RealGrid {
    let (c1, c2) = spec
        .center
        .unwrap_or(((rows / 2) as f64, (cols / 2) as f64));
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let dr = r as f64 - c1;
            let dc = c as f64 - c2;
            let inside = (dr * dr + dc * dc).sqrt() <= spec.radius;
            let value = match spec.mode {
                FilterMode::ZeroDisk => !inside,
                FilterMode::LowPass => inside,
            };
            data.push(if value { 1.0 } else { 0.0 });
        }
    }
    RealGrid::new(rows, cols, data).expect("mask dims are valid")
}

/// Multiplies both components of every transform entry by the mask
/// value at the same position.
pub fn apply_filter(transform: &ComplexGrid, mask: &RealGrid) -> Result<ComplexGrid> {
    if transform.rows() != mask.rows() || transform.cols() != mask.cols() {
        return Err(Error::DimMismatch {
            left_rows: transform.rows(),
            left_cols: transform.cols(),
            right_rows: mask.rows(),
            right_cols: mask.cols(),
        });
    }
    let data = transform
        .data()
        .iter()
        .zip(mask.data())
        .map(|(v, &m)| v * m)
        .collect();
    ComplexGrid::new(transform.rows(), transform.cols(), data)
}

/// Round half up, then clamp into `[0, max_val]`.
fn quantize(v: f64, max_val: u16) -> u16 {
    let r = (v + 0.5).floor();
    if r < 0.0 {
        0
    } else if r > max_val as f64 {
        max_val
    } else {
        r as u16
    }
}

/// Log-compressed view of a spectrum: `floor(max_val * log(1+s) /
/// log(1+s_max))`. Raw spectra are dominated by the zero-frequency term,
/// so the linear scale shows nothing.
fn log_scale(spec: &RealGrid, max_val: u16) -> GrayImage {
    let s_max = spec.data().iter().cloned().fold(0.0, f64::max);
    let pixels: Vec<u16> = if s_max <= 0.0 {
        vec![0; spec.rows() * spec.cols()]
    } else {
        let denom = (1.0 + s_max).ln();
        spec.data()
            .iter()
            .map(|&s| {
                let v = (max_val as f64 * (1.0 + s).ln() / denom).floor();
                quantize(v, max_val)
            })
            .collect()
    };
    GrayImage::new(spec.cols(), spec.rows(), max_val, pixels).expect("dims are valid")
}

/// Result of the full filter workflow.
#[derive(Debug, Clone)]
pub struct FilterOutcome {
    /// Filtered image, cropped back to the source dimensions.
    pub filtered: GrayImage,
    /// Log-scaled centered spectrum of the (unfiltered) transform, at
    /// the padded dimensions.
    pub spectrum_view: GrayImage,
    pub padded_rows: usize,
    pub padded_cols: usize,
    /// Largest imaginary component discarded when taking the real part
    /// of the inverse transform.
    pub max_imag_residual: f64,
}

/// Full workflow: pad, forward transform, center the spectrum, multiply
/// by the disk mask, undo the centering, inverse transform, take the
/// real part, crop to the source dimensions, round and clamp.
pub fn filter_image(image: &GrayImage, spec: &FilterSpec, nproc: usize) -> Result<FilterOutcome> {
    if !(spec.radius >= 0.0) {
        return Err(Error::InvalidParameters(format!(
            "filter radius must be nonnegative, got {}",
            spec.radius
        )));
    }
    let padded = pad_pow2(image);
    let transform = fft2d_with_workers(&padded.grid, nproc)?;
    let centered = rotate_half(&transform);
    let spectrum_view = log_scale(&spectrum(&centered), image.max_val());

    let mask = build_filter_mask(centered.rows(), centered.cols(), spec);
    let masked = apply_filter(&centered, &mask)?;
    let restored = ifft2d_with_workers(&rotate_half(&masked), nproc)?;

    let max_imag_residual = restored
        .data()
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0, f64::max);

    let mut pixels = Vec::with_capacity(image.width() * image.height());
    for y in 0..image.height() {
        for x in 0..image.width() {
            pixels.push(quantize(restored.get(y, x).re, image.max_val()));
        }
    }
    let filtered = GrayImage::new(image.width(), image.height(), image.max_val(), pixels)?;

    Ok(FilterOutcome {
        filtered,
        spectrum_view,
        padded_rows: padded.grid.rows(),
        padded_cols: padded.grid.cols(),
        max_imag_residual,
    })
}

/// The log-scaled centered spectrum of an image, without any filtering;
/// dimensions are the padded power-of-two dimensions.
pub fn log_spectrum_image(image: &GrayImage, nproc: usize) -> Result<GrayImage> {
    let padded = pad_pow2(image);
    let transform = fft2d_with_workers(&padded.grid, nproc)?;
    Ok(log_scale(&spectrum(&rotate_half(&transform)), image.max_val()))
}
