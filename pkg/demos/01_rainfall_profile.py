"""
Loading the rainfall table and looking at the seasonal profile
==============================================================

Reads the bundled monthly-rainfall CSV, fills the handful of missing
cells with column means, and prints the seasonal profile as a text
bar chart. Run from anywhere: paths are resolved relative to this file.
"""

from pathlib import Path

from floodxai import bar_chart, impute_missing, load_csv, monthly_means, provenance_lines

DATA = Path(__file__).resolve().parent.parent / "data" / "kerala.csv"

# Load and impute. `load_csv` keeps missing cells as NaN so nothing is
# silently invented; `impute_missing` fills them and records provenance.
raw = load_csv(DATA)
dataset = impute_missing(raw)

years = dataset.years()
floods = int(dataset.labels().sum())
print(f"{len(dataset)} years of record, {years[0]}..{years[-1]}")
print(f"{floods} flood years, {len(dataset) - floods} non-flood years")
print()

# Which cells were filled, and with what.
print("imputed cells:")
for line in provenance_lines(dataset):
    print("  " + line)
print()

# The monsoon months dominate the annual cycle.
means = monthly_means(dataset)
print("mean rainfall per month (mm):")
print(bar_chart(dataset.feature_names, means, width=40, value_format="{:7.1f}"))

wettest = dataset.feature_names[int(means.argmax())]
driest = dataset.feature_names[int(means.argmin())]
print(f"wettest month on average: {wettest}; driest: {driest}")
