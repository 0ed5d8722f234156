"""The weighted bandwidth objective and how row/column orders change it.

Run: python demos/01_objective.py
"""

from bandclust import (ROWS, Arrangement, DataMatrix, apply_arrangement, bandwidth_cost,
                       bandwidth_cost_delta, classic_bandwidth)

# a small two-mode matrix: 4 actors x 5 groups, heavier ties count more
A = DataMatrix(
    [[0, 0, 3, 1, 0],
     [2, 1, 0, 0, 0],
     [0, 0, 0, 2, 4],
     [1, 3, 0, 0, 0]],
    row_labels=["ana", "ben", "cy", "dee"],
    col_labels=["chess", "choir", "film", "hike", "swim"],
)
print("as given:       cost", bandwidth_cost(A), " classic bandwidth", classic_bandwidth(A))

# each cell contributes a^2 (i - j)^2, so big values far from the diagonal dominate
arr = Arrangement(row_perm=[1, 3, 0, 2], col_perm=[0, 1, 2, 3, 4])
B = apply_arrangement(A, arr)
print("rows reordered: cost", bandwidth_cost(A, arr), " classic bandwidth", classic_bandwidth(B))
print(B.row_labels)
print(B.values.astype(int))

# a swap's effect is available without recomputing the whole sum
delta = bandwidth_cost_delta(A, arr, (ROWS, 0, 1))
print("swapping the first two shown rows would change the cost by", delta)

# scaling the data scales the cost by the square of the factor
print("cost of 2A / cost of A =", bandwidth_cost(A.scaled(2), arr) / bandwidth_cost(A, arr))
print("transpose with swapped orders gives the same cost:",
      bandwidth_cost(A.transpose(), arr.transpose()) == bandwidth_cost(A, arr))
