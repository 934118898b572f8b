use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agents::{GameRecord, GameResult};
use crate::error::{Error, Result};

/// Outcome counts for a set of games. Plies are half-moves.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageStats {
    pub games_played: usize,
    pub white_wins: usize,
    pub black_wins: usize,
    pub aborted: usize,
    /// Absent when White won nothing.
    pub avg_plies_white_wins: Option<f64>,
    pub avg_plies_black_wins: Option<f64>,
}

impl StageStats {
    pub fn from_outcomes(outcomes: impl IntoIterator<Item = (GameResult, usize)>) -> StageStats {
        let mut s = StageStats::default();
        let (mut white_plies, mut black_plies) = (0usize, 0usize);
        for (result, plies) in outcomes {
            s.games_played += 1;
            match result {
                GameResult::White => {
                    s.white_wins += 1;
                    white_plies += plies;
                }
                GameResult::Black => {
                    s.black_wins += 1;
                    black_plies += plies;
                }
                GameResult::Aborted => s.aborted += 1,
            }
        }
        let mean = |total: usize, count: usize| (count > 0).then(|| total as f64 / count as f64);
        s.avg_plies_white_wins = mean(white_plies, s.white_wins);
        s.avg_plies_black_wins = mean(black_plies, s.black_wins);
        s
    }

    pub fn is_consistent(&self) -> bool {
        self.white_wins + self.black_wins + self.aborted == self.games_played
            && self.avg_plies_white_wins.is_some() == (self.white_wins > 0)
            && self.avg_plies_black_wins.is_some() == (self.black_wins > 0)
    }
}

pub fn compute_stats(records: &[GameRecord]) -> StageStats {
    StageStats::from_outcomes(records.iter().map(|r| (r.result, r.plies)))
}

/// One line of the stats CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub batch_id: String,
    pub stage_index: usize,
    pub stage_kind: String,
    pub games: usize,
    pub white_wins: usize,
    pub black_wins: usize,
    pub aborted: usize,
    pub avg_plies_white_wins: Option<f64>,
    pub avg_plies_black_wins: Option<f64>,
}

impl StatsRow {
    pub fn new(batch_id: &str, stage_index: usize, stage_kind: &str, s: &StageStats) -> StatsRow {
        StatsRow {
            batch_id: batch_id.to_string(),
            stage_index,
            stage_kind: stage_kind.to_string(),
            games: s.games_played,
            white_wins: s.white_wins,
            black_wins: s.black_wins,
            aborted: s.aborted,
            avg_plies_white_wins: s.avg_plies_white_wins,
            avg_plies_black_wins: s.avg_plies_black_wins,
        }
    }

    pub fn stats(&self) -> StageStats {
        StageStats {
            games_played: self.games,
            white_wins: self.white_wins,
            black_wins: self.black_wins,
            aborted: self.aborted,
            avg_plies_white_wins: self.avg_plies_white_wins,
            avg_plies_black_wins: self.avg_plies_black_wins,
        }
    }
}

pub fn csv_string(rows: &[StatsRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record([
            "batch_id",
            "stage_index",
            "stage_kind",
            "games",
            "white_wins",
            "black_wins",
            "aborted",
            "avg_plies_white_wins",
            "avg_plies_black_wins",
        ])
        .expect("in-memory CSV write");
    }
    for row in rows {
        w.serialize(row).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV output is UTF-8")
}

pub fn export_csv(rows: &[StatsRow], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, csv_string(rows)).map_err(|e| Error::io(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<StatsRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Csv { path: path.into(), source: e })?;
    r.deserialize()
        .collect::<std::result::Result<Vec<StatsRow>, _>>()
        .map_err(|e| Error::Csv { path: path.into(), source: e })
}

/// One line of a cross-evaluation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PitReport {
    pub label: String,
    pub games: usize,
    pub white_wins: usize,
    pub black_wins: usize,
    pub aborted: usize,
    pub avg_plies_white_wins: Option<f64>,
    pub avg_plies_black_wins: Option<f64>,
}

impl PitReport {
    pub fn new(label: &str, s: &StageStats) -> PitReport {
        PitReport {
            label: label.to_string(),
            games: s.games_played,
            white_wins: s.white_wins,
            black_wins: s.black_wins,
            aborted: s.aborted,
            avg_plies_white_wins: s.avg_plies_white_wins,
            avg_plies_black_wins: s.avg_plies_black_wins,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.white_wins + self.black_wins + self.aborted == self.games
    }
}

fn fmt_avg(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.0}"))
}

/// Renders reports as a plain-text table with "Games Won" and
/// "Average # of Moves" column groups.
pub fn render_pit_table(reports: &[PitReport]) -> String {
    let width = reports.iter().map(|r| r.label.chars().count()).max().unwrap_or(0).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:width$}  {:^15}  {:^20}  {:>7}", "", "Games Won", "Average # of Moves", "");
    let _ =
        writeln!(out, "{:width$}  {:>7} {:>7}  {:>9} {:>10}  {:>7}", "", "White", "Black", "White", "Black", "Aborted");
    for r in reports {
        let _ = writeln!(
            out,
            "{:width$}  {:>7} {:>7}  {:>9} {:>10}  {:>7}",
            r.label,
            r.white_wins,
            r.black_wins,
            fmt_avg(r.avg_plies_white_wins),
            fmt_avg(r.avg_plies_black_wins),
            r.aborted
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn means_over_won_games() {
        let s = StageStats::from_outcomes([(GameResult::White, 11), (GameResult::White, 13), (GameResult::Black, 20)]);
        assert_eq!((s.white_wins, s.black_wins, s.aborted), (2, 1, 0));
        assert_eq!(s.avg_plies_white_wins, Some(12.0));
        assert_eq!(s.avg_plies_black_wins, Some(20.0));
        assert!(s.is_consistent());
    }

    #[test]
    fn all_aborted_has_no_averages() {
        let s = StageStats::from_outcomes([(GameResult::Aborted, 1000), (GameResult::Aborted, 1000)]);
        assert_eq!((s.white_wins, s.black_wins, s.aborted), (0, 0, 2));
        assert_eq!(s.avg_plies_white_wins, None);
        assert_eq!(s.avg_plies_black_wins, None);
    }

    #[test]
    fn csv_layout_and_round_trip() {
        let s = StageStats::from_outcomes([(GameResult::White, 11), (GameResult::White, 14), (GameResult::Aborted, 9)]);
        let rows = vec![StatsRow::new("b1", 1, "cc", &s)];
        let text = csv_string(&rows);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "batch_id,stage_index,stage_kind,games,white_wins,black_wins,aborted,avg_plies_white_wins,avg_plies_black_wins"
        );
        assert_eq!(lines.next().unwrap(), "b1,1,cc,3,2,0,1,12.5,");
        assert_eq!(lines.next(), None);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stats.csv");
        export_csv(&rows, &path).unwrap();
        assert_eq!(read_csv(&path).unwrap()[0].stats(), s);
    }

    #[test]
    fn empty_pit_table() {
        let r = PitReport::new("W5 - B8", &StageStats::default());
        assert!(r.is_consistent());
        let table = render_pit_table(&[r]);
        assert!(table.contains("Games Won"));
        assert!(table.contains("Average # of Moves"));
        assert!(table.lines().nth(2).unwrap().starts_with("W5 - B8"));
    }
}
