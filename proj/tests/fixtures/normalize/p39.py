n = int(input())
a = list(map(int, input().split()))
assert len(a) == n, "bad input"
inv = 0
for i in range(n):
    for j in range(i + 1, n):
        if a[i] > a[j]:
            inv += 1
print(inv)
