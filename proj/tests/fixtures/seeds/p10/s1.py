def gcd(a, b):
    while b:
        a, b = b, a % b
    return a

x, y = 84, 36
g = gcd(x, y)
print(g, x * y // g)
