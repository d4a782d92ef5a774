def count_bits(v):
    c = 0
    while v:
        v &= v - 1
        c += 1
    return c

n = int(input())
print(max(count_bits(i) for i in range(n + 1)))
