def is_prime(v):
    if v < 2:
        return False
    d = 2
    while d * d <= v:
        if v % d == 0:
            return False
        d += 1
    return True

print(sum(1 for q in range(int(input())) if is_prime(q)))
