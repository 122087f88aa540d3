//! Stage-level model of the hardware pipeline.
//!
//! Each stage is a small register machine that processes one element per
//! step and raises `done` when its index runs off the end. The driver only
//! starts a stage after its predecessor is done, charging the stage's fixed
//! overhead once and its cycles-per-iteration for every step taken.

use std::fmt;

use crate::equalize::PixelMap;
use crate::error::{Error, Result};
use crate::image::{GrayImage, GRAY_LEVELS, MAX_PIXELS};
use crate::smbe::{Threshold, SENTINEL};

const L: i64 = GRAY_LEVELS as i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    GenerateHist,
    CalculateSmbe,
    FindThreshold,
    GenCumuHist,
    CreateMap,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::GenerateHist,
        Stage::CalculateSmbe,
        Stage::FindThreshold,
        Stage::GenCumuHist,
        Stage::CreateMap,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::GenerateHist => "GenerateHist",
            Stage::CalculateSmbe => "CalculateSmbe",
            Stage::FindThreshold => "FindThreshold",
            Stage::GenCumuHist => "GenCumuHist",
            Stage::CreateMap => "CreateMap",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed and per-iteration cost of one stage, in clock cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageCost {
    pub overhead: u64,
    pub cpi: u64,
}

/// Clock frequency plus per-stage costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleModel {
    clock_mhz: f64,
    costs: [StageCost; 5],
}

impl Default for CycleModel {
    /// One pixel per clock for histogramming; the 256-entry stages are
    /// calibrated against the 300 MHz timings (771 cycles for each of the
    /// SMBE and threshold scans, 780 for each pair of segment calls).
    fn default() -> Self {
        Self {
            clock_mhz: 300.0,
            costs: [
                StageCost { overhead: 0, cpi: 1 },
                StageCost { overhead: 3, cpi: 3 },
                StageCost { overhead: 3, cpi: 3 },
                StageCost { overhead: 6, cpi: 3 },
                StageCost { overhead: 6, cpi: 3 },
            ],
        }
    }
}

impl CycleModel {
    pub fn with_clock(mut self, clock_mhz: f64) -> Option<Self> {
        (clock_mhz.is_finite() && clock_mhz > 0.0).then(|| {
            self.clock_mhz = clock_mhz;
            self
        })
    }

    /// Overrides one stage's cost. A zero `cpi` is rejected.
    pub fn with_cost(mut self, stage: Stage, cost: StageCost) -> Option<Self> {
        (cost.cpi > 0).then(|| {
            self.costs[stage.index()] = cost;
            self
        })
    }

    pub fn clock_mhz(&self) -> f64 {
        self.clock_mhz
    }

    pub fn cost(&self, stage: Stage) -> StageCost {
        self.costs[stage.index()]
    }

    pub fn micros(&self, cycles: u64) -> f64 {
        cycles as f64 / self.clock_mhz
    }
}

/// Timing of one stage execution.
#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub stage: Stage,
    /// Segment bounds for the two-call stages.
    pub segment: Option<(u8, u8)>,
    pub iterations: u64,
    /// Cycle at which the predecessor's done flag fired.
    pub start_cycle: u64,
    pub cycles: u64,
    pub micros: f64,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub reports: Vec<StageReport>,
    pub threshold: Threshold,
    pub map: PixelMap,
}

impl Simulation {
    pub fn total_cycles(&self) -> u64 {
        self.reports.iter().map(|r| r.cycles).sum()
    }

    /// Summed cycles of every execution of `stage`.
    pub fn stage_cycles(&self, stage: Stage) -> u64 {
        self.reports
            .iter()
            .filter(|r| r.stage == stage)
            .map(|r| r.cycles)
            .sum()
    }
}

trait Unit {
    fn done(&self) -> bool;
    fn step(&mut self);
}

struct HistUnit<'a> {
    image: &'a [u8],
    index: usize,
    freq: [u32; GRAY_LEVELS],
    sum: u64,
}

impl Unit for HistUnit<'_> {
    fn done(&self) -> bool {
        self.index >= self.image.len()
    }

    fn step(&mut self) {
        let p = self.image[self.index];
        self.freq[p as usize] += 1;
        self.sum += p as u64;
        self.index += 1;
    }
}

struct SmbeUnit<'a> {
    freq: &'a [u32; GRAY_LEVELS],
    n: i64,
    sum: i64,
    index: usize,
    first: bool,
    prev: i64,
    smbe: [i32; GRAY_LEVELS],
}

impl Unit for SmbeUnit<'_> {
    fn done(&self) -> bool {
        self.index >= GRAY_LEVELS
    }

    fn step(&mut self) {
        let f = self.freq[self.index] as i64;
        if self.first {
            self.prev = L * (self.n - f) - 2 * self.sum;
            self.first = false;
        } else {
            self.prev += self.n - L * f;
        }
        self.smbe[self.index] = if f == 0 { SENTINEL } else { self.prev as i32 };
        self.index += 1;
    }
}

struct ThresholdUnit<'a> {
    smbe: &'a [i32; GRAY_LEVELS],
    index: usize,
    threshold_val: i32,
    threshold: Threshold,
}

impl Unit for ThresholdUnit<'_> {
    fn done(&self) -> bool {
        self.index >= GRAY_LEVELS
    }

    fn step(&mut self) {
        let v = self.smbe[self.index];
        if v < 0 && -v < self.threshold_val {
            self.threshold_val = -v;
            self.threshold = Threshold { value: self.index as u8, smbe: v };
        } else if v >= 0 && v < self.threshold_val {
            self.threshold_val = v;
            self.threshold = Threshold { value: self.index as u8, smbe: v };
        }
        self.index += 1;
    }
}

struct CumuUnit<'a> {
    freq: &'a [u32; GRAY_LEVELS],
    idx_l: usize,
    idx_h: usize,
    idx_offset: usize,
    prev: u32,
    cumu_freq: Vec<u32>,
}

impl Unit for CumuUnit<'_> {
    fn done(&self) -> bool {
        self.idx_l + self.idx_offset > self.idx_h
    }

    fn step(&mut self) {
        self.prev += self.freq[self.idx_l + self.idx_offset];
        self.cumu_freq.push(self.prev);
        self.idx_offset += 1;
    }
}

struct MapUnit<'a> {
    cumu_freq: &'a [u32],
    lo: u64,
    hi: u64,
    num_entries: u64,
    half_num_entries: u64,
    index: usize,
    out: Vec<u8>,
}

impl Unit for MapUnit<'_> {
    fn done(&self) -> bool {
        self.index >= self.cumu_freq.len()
    }

    fn step(&mut self) {
        let value = if self.num_entries == 0 {
            self.lo + self.index as u64
        } else {
            let numerator =
                self.num_entries * self.lo + (self.hi - self.lo) * self.cumu_freq[self.index] as u64;
            let q = numerator / self.num_entries;
            q + (numerator % self.num_entries > self.half_num_entries) as u64
        };
        self.out.push(value as u8);
        self.index += 1;
    }
}

struct Clock<'m> {
    model: &'m CycleModel,
    now: u64,
    reports: Vec<StageReport>,
}

impl Clock<'_> {
    fn run(&mut self, stage: Stage, segment: Option<(u8, u8)>, unit: &mut impl Unit) {
        let cost = self.model.cost(stage);
        let start = self.now;
        let mut cycles = cost.overhead;
        let mut iterations = 0u64;
        while !unit.done() {
            unit.step();
            iterations += 1;
            cycles += cost.cpi;
        }
        self.now += cycles;
        self.reports.push(StageReport {
            stage,
            segment,
            iterations,
            start_cycle: start,
            cycles,
            micros: self.model.micros(cycles),
        });
    }
}

/// Runs the five-stage pipeline on `image` under `model`.
pub fn simulate(image: &GrayImage, model: &CycleModel) -> Result<Simulation> {
    if image.len() as u64 > MAX_PIXELS as u64 {
        return Err(Error::ImageTooLarge {
            pixels: image.len() as u64,
            max: MAX_PIXELS as u64,
        });
    }
    let mut clock = Clock {
        model,
        now: 0,
        reports: Vec::with_capacity(7),
    };

    let mut hist = HistUnit {
        image: image.pixels(),
        index: 0,
        freq: [0; GRAY_LEVELS],
        sum: 0,
    };
    clock.run(Stage::GenerateHist, None, &mut hist);

    let mut smbe = SmbeUnit {
        freq: &hist.freq,
        n: image.len() as i64,
        sum: hist.sum as i64,
        index: 0,
        first: true,
        prev: 0,
        smbe: [SENTINEL; GRAY_LEVELS],
    };
    clock.run(Stage::CalculateSmbe, None, &mut smbe);

    let mut find = ThresholdUnit {
        smbe: &smbe.smbe,
        index: 0,
        threshold_val: SENTINEL,
        threshold: Threshold { value: 0, smbe: SENTINEL },
    };
    clock.run(Stage::FindThreshold, None, &mut find);
    let threshold = find.threshold;

    let mut map = PixelMap::identity();
    let mut segments = vec![(0u8, threshold.value)];
    if threshold.value < 255 {
        segments.push((threshold.value + 1, 255));
    }
    let mut entries = *map.entries();
    for (lo, hi) in segments {
        let mut cumu = CumuUnit {
            freq: &hist.freq,
            idx_l: lo as usize,
            idx_h: hi as usize,
            idx_offset: 0,
            prev: 0,
            cumu_freq: Vec::with_capacity(hi as usize - lo as usize + 1),
        };
        clock.run(Stage::GenCumuHist, Some((lo, hi)), &mut cumu);

        let num_entries = *cumu.cumu_freq.last().expect("segment width >= 1") as u64;
        let mut create = MapUnit {
            cumu_freq: &cumu.cumu_freq,
            lo: lo as u64,
            hi: hi as u64,
            num_entries,
            half_num_entries: num_entries >> 1,
            index: 0,
            out: Vec::with_capacity(cumu.cumu_freq.len()),
        };
        clock.run(Stage::CreateMap, Some((lo, hi)), &mut create);
        entries[lo as usize..=hi as usize].copy_from_slice(&create.out);
    }
    map = PixelMap::new(entries, threshold.value);

    Ok(Simulation {
        reports: clock.reports,
        threshold,
        map,
    })
}

/// Aligned text table, one row per stage execution.
pub fn format_table(reports: &[StageReport], model: &CycleModel) -> String {
    let mut out = format!(
        "{:<14} {:>10} {:>12} {:>12} {:>12}\n",
        "stage", "segment", "iterations", "cycles", "micros"
    );
    for r in reports {
        let seg = r
            .segment
            .map(|(lo, hi)| format!("{lo}-{hi}"))
            .unwrap_or_else(|| "-".into());
        out += &format!(
            "{:<14} {:>10} {:>12} {:>12} {:>12.4}\n",
            r.stage.name(),
            seg,
            r.iterations,
            r.cycles,
            r.micros
        );
    }
    let total: u64 = reports.iter().map(|r| r.cycles).sum();
    out += &format!(
        "{:<14} {:>10} {:>12} {:>12} {:>12.4}\n",
        "total",
        "",
        "",
        total,
        model.micros(total)
    );
    out
}

/// `stage,iterations,cycles,micros` CSV, LF line endings.
pub fn format_csv(reports: &[StageReport]) -> String {
    let mut out = String::from("stage,iterations,cycles,micros\n");
    for r in reports {
        out += &format!("{},{},{},{:.4}\n", r.stage, r.iterations, r.cycles, r.micros);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equalize::mmbebhe;

    fn e1() -> GrayImage {
        GrayImage::from_row(vec![0, 0, 0, 50, 50, 100, 200, 200]).unwrap()
    }

    #[test]
    fn e1_reports() {
        let sim = simulate(&e1(), &CycleModel::default()).unwrap();
        assert_eq!(sim.map, mmbebhe(&e1()).unwrap());
        assert_eq!(sim.threshold, Threshold { value: 50, smbe: -32 });

        let stages: Vec<_> = sim.reports.iter().map(|r| (r.stage, r.segment)).collect();
        assert_eq!(
            stages,
            vec![
                (Stage::GenerateHist, None),
                (Stage::CalculateSmbe, None),
                (Stage::FindThreshold, None),
                (Stage::GenCumuHist, Some((0, 50))),
                (Stage::CreateMap, Some((0, 50))),
                (Stage::GenCumuHist, Some((51, 255))),
                (Stage::CreateMap, Some((51, 255))),
            ]
        );
        assert_eq!(sim.reports[0].cycles, 8);
        assert_eq!(sim.reports[1].cycles, 771);
        assert_eq!(sim.reports[2].cycles, 771);
        assert_eq!(sim.reports[3].iterations, 51);
        assert_eq!(sim.reports[5].iterations, 205);
        assert_eq!(sim.stage_cycles(Stage::GenCumuHist), 780);
        assert_eq!(sim.stage_cycles(Stage::CreateMap), 780);
        assert!((sim.reports[1].micros - 2.57).abs() < 1e-12);

        for pair in sim.reports.windows(2) {
            assert_eq!(pair[1].start_cycle, pair[0].start_cycle + pair[0].cycles);
        }
    }

    #[test]
    fn top_threshold_skips_upper_calls() {
        let img = GrayImage::filled(3, 3, 255).unwrap();
        let sim = simulate(&img, &CycleModel::default()).unwrap();
        assert_eq!(sim.reports.len(), 5);
        assert_eq!(sim.reports[3].segment, Some((0, 255)));
        assert_eq!(sim.reports[3].cycles, 6 + 3 * 256);
    }

    #[test]
    fn model_validation() {
        assert!(CycleModel::default().with_clock(0.0).is_none());
        assert!(CycleModel::default().with_clock(f64::NAN).is_none());
        let m = CycleModel::default().with_clock(100.0).unwrap();
        assert_eq!(m.micros(771), 7.71);
        assert!(CycleModel::default()
            .with_cost(Stage::CreateMap, StageCost { overhead: 1, cpi: 0 })
            .is_none());
    }

    #[test]
    fn csv_layout() {
        let sim = simulate(&e1(), &CycleModel::default()).unwrap();
        let csv = format_csv(&sim.reports);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("stage,iterations,cycles,micros"));
        assert_eq!(lines.next(), Some("GenerateHist,8,8,0.0267"));
        assert_eq!(lines.next(), Some("CalculateSmbe,256,771,2.5700"));
        assert_eq!(csv.lines().count(), 8);
        assert!(!csv.contains('\r'));
    }
}
