# Copyright 2026 PyUnnest development team
#
# This file is part of the PyUnnest library.
#
# The PyUnnest library is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.
#
# The PyUnnest library is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received copies of the GNU Lesser General Public License
# along with the PyUnnest library.  If not, see https://www.gnu.org/licenses/.

import argparse
import csv
import os.path

import matplotlib.pyplot as plt
import numpy as np


def read_fuzz_log(filename):
    """Returns (kinds, kind_counts, columns): kind_counts has one row per trial and one column per node kind,
    columns maps the other numeric variables of the log to arrays."""
    with open(filename, 'r') as csvfile:
        rows = list(csv.DictReader(csvfile, delimiter=','))
    if not rows:
        raise ValueError("no trials in " + filename)
    kinds = [name[len('kind_'):] for name in rows[0] if name.startswith('kind_')]
    kind_counts = np.array([[int(row['kind_' + kind] or 0) for kind in kinds] for row in rows])
    columns = {}
    for name in ('passed', 'nodes', 'dependent_joins', 'unnested_nodes', 'push_down_visits', 'max_visits'):
        if name in rows[0]:
            columns[name] = np.array([int(row[name] or 0) for row in rows])
    return kinds, kind_counts, columns


def plot_coverage(filename_array, path_to_folder):

    fig1 = plt.figure(figsize=(10, 8))
    plot1_fig1 = fig1.add_subplot(211)
    plot2_fig1 = fig1.add_subplot(212)

    fig2 = plt.figure(figsize=(10, 8))
    plot1_fig2 = fig2.add_subplot(221)
    plot2_fig2 = fig2.add_subplot(222)
    plot3_fig2 = fig2.add_subplot(212)

    width = 0.8 / len(filename_array)
    for index, filename in enumerate(filename_array):
        label = os.path.basename(filename).replace(".csv", "")
        kinds, kind_counts, columns = read_fuzz_log(filename)
        positions = np.arange(len(kinds)) + index * width

        # -------------------------------- node kind coverage --------------------------------
        plot1_fig1.bar(positions, kind_counts.sum(axis=0), width, label=label)
        plot2_fig1.bar(positions, (kind_counts > 0).mean(axis=0) * 100.0, width, label=label)

        # -------------------------------- verdicts and rewrite sizes --------------------------------
        passed = columns.get('passed', np.zeros(len(kind_counts), dtype=int))
        plot1_fig2.bar([index], [passed.sum()], color='tab:green', label='passed' if index == 0 else None)
        plot1_fig2.bar([index], [len(passed) - passed.sum()], bottom=[passed.sum()], color='tab:red',
                       label='failed' if index == 0 else None)

        if 'dependent_joins' in columns:
            bins = np.arange(columns['dependent_joins'].max() + 2) - 0.5
            plot2_fig2.hist(columns['dependent_joins'], bins=bins, alpha=0.6, label=label)
        if 'nodes' in columns and 'unnested_nodes' in columns:
            plot3_fig2.plot(columns['nodes'], columns['unnested_nodes'], '.', label=label)

    plot1_fig1.set_xticks(np.arange(len(kinds)) + 0.4 - width / 2)
    plot1_fig1.set_xticklabels(kinds, rotation=45, ha='right')
    plot1_fig1.set_ylabel('Operators generated')
    plot1_fig1.grid(True)
    plot1_fig1.legend(loc=0, prop={'size': 8})
    plot1_fig1.set_title("Node kind coverage")

    plot2_fig1.set_xticks(np.arange(len(kinds)) + 0.4 - width / 2)
    plot2_fig1.set_xticklabels(kinds, rotation=45, ha='right')
    plot2_fig1.set_ylabel('Plans containing the kind (%)')
    plot2_fig1.set_ylim(ymin=0, ymax=100)
    plot2_fig1.grid(True)

    plot1_fig2.set_xticks(range(len(filename_array)))
    plot1_fig2.set_xticklabels([os.path.basename(f).replace(".csv", "") for f in filename_array])
    plot1_fig2.set_ylabel('Trials')
    plot1_fig2.legend(loc=0, prop={'size': 8})
    plot1_fig2.set_title("Verdicts")

    plot2_fig2.set_xlabel('Dependent joins per plan')
    plot2_fig2.set_ylabel('Trials')
    plot2_fig2.legend(loc=0, prop={'size': 8})

    plot3_fig2.set_xlabel('Operators in the generated plan')
    plot3_fig2.set_ylabel('Operators after unnesting')
    plot3_fig2.grid(True)
    plot3_fig2.legend(loc=0, prop={'size': 8})

    fig1.tight_layout()
    fig1.savefig(os.path.join(path_to_folder, "kind_coverage.png"))

    fig2.tight_layout()
    fig2.savefig(os.path.join(path_to_folder, "verdicts.png"))
    plt.close('all')


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description='Plots the measurements logged by "main_unnest.py fuzz --log".')
    parser.add_argument('log_files', metavar='fuzz.csv', type=str, nargs='+', help='CSV files written by fuzz')
    parser.add_argument('--output', metavar='FOLDER', type=str, default='.', help='folder of the png files')
    args = parser.parse_args()
    plot_coverage(args.log_files, args.output)
