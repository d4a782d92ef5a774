n = int(input())
a = list(map(int, input().split()))
best = a[0]
for i in range(n):
    cur = 0
    for j in range(i, n):
        cur += a[j]
        best = max(best, cur)
print(best)
