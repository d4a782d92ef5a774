n = int(input())
a = list(map(int, input().split()))
best = a[0]
cur = 0
for v in a:
    cur = max(v, cur + v)
    best = max(best, cur)
print(best)
