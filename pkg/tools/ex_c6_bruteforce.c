/* Independent brute-force oracle for ex(n, C6), n <= 10.
 *
 * Walks all edge subsets in lexicographic pair order (include-first),
 * keeping only C6-free prefixes (C6-freeness is hereditary) and cutting a
 * branch when even taking every remaining pair cannot beat the best count.
 * A new edge uv closes a 6-cycle iff there is a simple u..v path of exactly
 * five edges in the graph without uv, found by plain DFS over adjacency masks.
 *
 * Build: cc -O2 -o ex_c6 ex_c6_bruteforce.c ; run: ./ex_c6 <n>
 */
#include <stdio.h>
#include <stdlib.h>

static int n, npairs, pu[64], pv[64];
static unsigned adj[16];
static int best;
static unsigned bestadj[16];

static int path5(int x, int target, int len, unsigned seen) {
    if (len == 5) return x == target;
    unsigned m = adj[x] & ~seen;
    while (m) {
        int y = __builtin_ctz(m);
        m &= m - 1;
        if (y == target && len + 1 != 5) continue;
        if (path5(y, target, len + 1, seen | (1u << y))) return 1;
    }
    return 0;
}

static void rec(int i, int count) {
    if (count + (npairs - i) <= best) return;
    if (i == npairs) {
        best = count;
        for (int k = 0; k < n; k++) bestadj[k] = adj[k];
        return;
    }
    int u = pu[i], v = pv[i];
    if (!path5(u, v, 0, 1u << u)) {
        adj[u] |= 1u << v; adj[v] |= 1u << u;
        rec(i + 1, count + 1);
        adj[u] &= ~(1u << v); adj[v] &= ~(1u << u);
    }
    rec(i + 1, count);
}

int main(int argc, char **argv) {
    n = atoi(argv[1]);
    for (int a = 0; a < n; a++)
        for (int b = a + 1; b < n; b++) { pu[npairs] = a; pv[npairs] = b; npairs++; }
    best = -1;
    rec(0, 0);
    printf("%d %d\n", n, best);
    for (int a = 0; a < n; a++)
        for (int b = a + 1; b < n; b++)
            if (bestadj[a] >> b & 1) printf("%d %d\n", a, b);
    return 0;
}
