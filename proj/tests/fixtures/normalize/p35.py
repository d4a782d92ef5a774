import bisect
a = sorted(map(int, input().split()))
for q in map(int, input().split()):
    print(bisect.bisect_right(a, q), end=" ")
print()
