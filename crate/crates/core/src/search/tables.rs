//! The published sieve configurations, one record per row.

pub struct TableRow {
    pub table: u8,
    pub index: u8,
    pub q: u64,
    pub m: u64,
    /// Product of the absorbed primes.
    pub d: u64,
    pub r: usize,
    /// Absorbed polynomial as printed, integer coefficients.
    pub g: &'static str,
    pub s: usize,
    pub lambda: &'static str,
    pub big_lambda: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    table: u8,
    index: u8,
    (q, m): (u64, u64),
    d: u64,
    r: usize,
    g: &'static str,
    s: usize,
    [lambda, big_lambda, lhs, rhs]: [&'static str; 4],
) -> TableRow {
    TableRow { table, index, q, m, d, r, g, s, lambda, big_lambda, lhs, rhs }
}

pub const TABLE_ROWS: [TableRow; 44] = [
    row(1, 1, (5, 15), 2, 5, "1", 2, ["0.2333", "57.7227", "34938.5622", "2078.0165"]),
    row(1, 2, (5, 20), 6, 6, "x^3+x^2+x+1", 1, ["0.1834", "72.9108", "1.95e6", "671945.3645"]),
    row(1, 3, (5, 30), 42, 8, "x+1", 3, ["0.1164", "182.3967", "6.11e9", "420242.0506"]),
    row(1, 4, (25, 10), 6, 6, "x+1", 1, ["0.5034", "27.8281", "390625", "16028.9471"]),
    row(1, 5, (25, 12), 546, 4, "x+1", 11, ["0.0458", "635.7250", "9.765e6", "5.859e6"]),
    row(1, 6, (125, 12), 6, 9, "1", 8, ["0.2659", "126.0757", "3.05e10", "18154.9109"]),
    row(1, 7, (125, 5), 2, 5, "1", 1, ["0.6973", "17.7752", "1397.5425", "639.9063"]),
    row(1, 8, (125, 6), 6, 5, "1", 4, ["0.5095", "35.3693", "15625", "5093.1744"]),
    row(1, 9, (625, 5), 6, 6, "1", 1, ["0.5802", "24.4089", "15625.00", "3514.8681"]),
    row(1, 10, (3125, 5), 2, 6, "1", 1, ["0.7566", "19.1818", "174692.8108", "690.5445"]),
    row(1, 11, (15625, 5), 6, 9, "x+4", 0, ["0.3907", "45.5122", "1.95e6", "26214.9767"]),
    row(1, 12, (3125, 6), 6, 9, "1", 4, ["0.3895", "66.1988", "9.76e6", "9532.6267"]),
    row(1, 13, (78125, 6), 6, 10, "1", 4, ["0.5083", "55.1086", "6.11e9", "7935.6342"]),
    row(1, 14, (125, 10), 6, 9, "x+1", 1, ["0.3747", "52.7078", "2.44e8", "30359.6925"]),
    row(1, 15, (625, 6), 6, 6, "1", 6, ["0.4671", "51.2505", "390625", "7380.0659"]),
    row(1, 16, (125, 8), 6, 6, "1", 6, ["0.4219", "73.6782", "1.95e6", "10609.6639"]),
    row(1, 17, (3125, 8), 6, 9, "1", 6, ["0.5661", "53.2294", "3.05e10", "7665.0475"]),
    row(1, 18, (15625, 6), 6, 9, "1", 6, ["0.3297", "89.9560", "2.44e8", "12953.6563"]),
    row(2, 1, (5, 11), 2, 1, "x+4", 2, ["0.9987", "7.0064", "1397.5425", "1008.9234"]),
    row(2, 2, (5, 13), 2, 1, "x+4", 3, ["0.9903", "9.0679", "6987.7125", "1305.7706"]),
    row(2, 3, (5, 14), 6, 3, "x+1", 3, ["0.5262", "22.9037", "15625", "13192.5516"]),
    row(2, 4, (5, 18), 6, 5, "x^2+4", 4, ["0.3814", "46.5667", "390625", "107289.6537"]),
    row(2, 5, (5, 21), 2, 4, "x+4", 4, ["0.8497", "19.6529", "4.36e6", "2830.0241"]),
    row(2, 6, (5, 22), 2, 5, "x^2+4", 4, ["0.2136", "81.5928", "9.76e6", "46997.4470"]),
    row(2, 7, (5, 26), 6, 3, "x^2+4", 6, ["0.9804", "19.3405", "2.44e8", "44560.4267"]),
    row(2, 8, (5, 28), 6, 5, "x^3+x^2+x+1", 5, ["0.3721", "53.0589", "1.22e9", "488990.4206"]),
    row(2, 9, (5, 32), 6, 6, "x^3+x^2+x+1", 7, ["0.1548", "163.5391", "3.05e10", "1.51e6"]),
    row(2, 10, (5, 36), 6, 9, "x^3+x^2+x+1", 9, ["0.0099", "3513.7601", "7.62e11", "3.23e7"]),
    row(2, 11, (5, 42), 6, 10, "x^2+4", 8, ["0.3477", "102.6685", "9.54e13", "236548.2720"]),
    row(2, 12, (5, 48), 6, 9, "x^{48}-1", 0, ["0.3683", "48.1480", "1.19e16", "7.62e15"]),
    row(2, 13, (5, 16), 6, 4, "1", 8, ["0.3891", "61.1042", "78125", "8799.0116"]),
    row(2, 14, (25, 7), 2, 4, "1", 3, ["0.1796", "74.4012", "3125", "2678.4426"]),
    row(2, 15, (25, 9), 6, 5, "1", 5, ["0.3015", "65.0286", "78125", "9364.1076"]),
    row(2, 16, (25, 11), 2, 5, "1", 3, ["0.1361", "112.1752", "1.95e6", "4038.3076"]),
    row(2, 17, (25, 13), 2, 4, "1", 7, ["0.2337", "91.8591", "4.88e7", "3306.9261"]),
    row(2, 18, (25, 14), 6, 5, "1", 6, ["0.6121", "36.3071", "2.44e8", "5228.2112"]),
    row(2, 19, (25, 16), 6, 6, "1", 12, ["0.06837", "513.9088", "6.10e9", "74002.8646"]),
    row(2, 20, (25, 18), 42, 8, "1", 10, ["0.1357", "259.9584", "1.52e11", "149736.0317"]),
    row(2, 21, (25, 21), 6, 10, "1", 9, ["0.2676", "140.2269", "1.90e13", "20192.6820"]),
    row(2, 22, (25, 36), 546, 12, "x^3+x^2+x+1", 17, ["0.01522", "3747.2929", "5.82e23", "5.52e8"]),
    row(2, 23, (125, 7), 2, 4, "1", 7, ["0.9137", "24.9830", "174692.8107", "899.3900"]),
    row(2, 24, (125, 9), 2, 7, "1", 5, ["0.7850", "31.2985", "2.18e7", "1126.7472"]),
    row(2, 25, (625, 7), 2, 6, "1", 3, ["0.1027", "167.4261", "9.76e6", "6027.3412"]),
    row(2, 26, (625, 9), 6, 9, "1", 5, ["0.3208", "86.1439", "6.10e9", "12404.7359"]),
];
