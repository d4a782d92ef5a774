n = int(input())
a = list(map(int, input().split()))
tree = [0] * (n + 1)
order = sorted(range(n), key=lambda i: a[i])
rank = [0] * n
for pos, i in enumerate(order):
    rank[i] = pos + 1
inv = 0
for i in range(n - 1, -1, -1):
    r = rank[i] - 1
    while r > 0:
        inv += tree[r]
        r -= r & -r
    r = rank[i]
    while r <= n:
        tree[r] += 1
        r += r & -r
print(inv)
