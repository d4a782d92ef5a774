n = int(input())
a = list(map(int, input().split()))
q = int(input())
out = []
for _ in range(q):
    l, r = map(int, input().split())
    s = 0
    for i in range(l - 1, r):
        s += a[i]
    out.append(s)
print(sum(out))
